//! Brute-force geometric isomorphism.
//!
//! Enumerates attribute- and adjacency-preserving bijections (pruned by
//! scalars, degree and one round of colour refinement) and accepts a
//! bijection when the centred positions and vector features, stacked in
//! matched order, have equal Gram matrices. Under `SO` with full rank the
//! orientation of one maximal independent subset must also agree. This is
//! exponential and meant for small graphs only.

use std::collections::HashMap;

use crate::error::{GwlError, Result};
use crate::graph::{GeometricGraph, GroupSpec, IsometryWitness};
use crate::linalg::{align_orthogonal, det, greedy_basis, Vector};

/// Largest node count the oracle accepts by default.
pub const DEFAULT_ORACLE_CAP: usize = 10;

/// Runs the oracle with [`DEFAULT_ORACLE_CAP`].
pub fn geometric_isomorphism_oracle(
    g1: &GeometricGraph,
    g2: &GeometricGraph,
    group: GroupSpec,
) -> Result<(bool, Option<IsometryWitness>)> {
    geometric_isomorphism_oracle_with_cap(g1, g2, group, DEFAULT_ORACLE_CAP)
}

pub fn geometric_isomorphism_oracle_with_cap(
    g1: &GeometricGraph,
    g2: &GeometricGraph,
    group: GroupSpec,
    cap: usize,
) -> Result<(bool, Option<IsometryWitness>)> {
    g1.check_compatible(g2)?;
    group.check(g1)?;
    let n = g1.len();
    if n.max(g2.len()) > cap {
        return Err(GwlError::OracleCapExceeded {
            n: n.max(g2.len()),
            cap,
        });
    }
    if n != g2.len() {
        return Ok((false, None));
    }
    let Some((c1, c2)) = prune_colours(g1, g2) else {
        return Ok((false, None));
    };
    let s1 = stacks(g1);
    let s2 = stacks(g2);
    let mut search = Search {
        g1,
        g2,
        c1: &c1,
        c2: &c2,
        s1: &s1,
        s2: &s2,
        order: search_order(&c1, &c2),
        mapping: vec![usize::MAX; n],
        used: vec![false; n],
        check_geometry: true,
        group: Some(group),
        found: Vec::new(),
        limit: 1,
    };
    search.run(0);
    let Some(perm) = search.found.pop() else {
        return Ok((false, None));
    };
    let witness = build_witness(g1, g2, &s1, &s2, &perm, group);
    Ok((true, Some(witness)))
}

/// Enumerates up to `limit` bijections `b` (as `b[i]` = image of `i`) that
/// preserve scalars, vector-feature counts and adjacency, ignoring geometry.
pub fn attributed_isomorphisms(
    g1: &GeometricGraph,
    g2: &GeometricGraph,
    limit: usize,
) -> Vec<Vec<usize>> {
    if g1.len() != g2.len() {
        return Vec::new();
    }
    let Some((c1, c2)) = prune_colours(g1, g2) else {
        return Vec::new();
    };
    let s1 = stacks(g1);
    let s2 = stacks(g2);
    let n = g1.len();
    let mut search = Search {
        g1,
        g2,
        c1: &c1,
        c2: &c2,
        s1: &s1,
        s2: &s2,
        order: search_order(&c1, &c2),
        mapping: vec![usize::MAX; n],
        used: vec![false; n],
        check_geometry: false,
        group: None,
        found: Vec::new(),
        limit,
    };
    search.run(0);
    search.found
}

/// Whether the ordered node lists `a` (in `g1`) and `b` (in `g2`) carry
/// congruent geometry relative to the anchors `a[0]` and `b[0]`: positions
/// relative to the anchor plus vector features, stacked in list order.
pub fn congruent_under(
    g1: &GeometricGraph,
    a: &[usize],
    g2: &GeometricGraph,
    b: &[usize],
    group: GroupSpec,
) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return a.len() == b.len();
    }
    let collect = |g: &GeometricGraph, nodes: &[usize]| {
        let anchor = g.position(nodes[0]).clone();
        let mut out = Vec::new();
        for &u in nodes {
            out.push(g.position(u).sub(&anchor));
            out.extend(g.vectors(u).iter().cloned());
        }
        out
    };
    let l1 = collect(g1, a);
    let l2 = collect(g2, b);
    same_gram_and_orientation(&l1, &l2, group)
}

/// Gram equality plus, under `SO` at full rank, matching orientation of the
/// first maximal independent subset.
pub fn same_gram_and_orientation(l1: &[Vector], l2: &[Vector], group: GroupSpec) -> bool {
    if l1.len() != l2.len() {
        return false;
    }
    for i in 0..l1.len() {
        for j in i..l1.len() {
            if l1[i].dot(&l1[j]) != l2[i].dot(&l2[j]) {
                return false;
            }
        }
    }
    orientation_agrees(l1, l2, group)
}

fn orientation_agrees(l1: &[Vector], l2: &[Vector], group: GroupSpec) -> bool {
    if !group.is_rotation_only() {
        return true;
    }
    let basis = greedy_basis(l1);
    if basis.len() < group.dim {
        return true;
    }
    let rows1: Vec<Vector> = basis.iter().map(|&i| l1[i].clone()).collect();
    let rows2: Vec<Vector> = basis.iter().map(|&i| l2[i].clone()).collect();
    let scale: f64 = rows1
        .iter()
        .map(|v| v.to_f64s().iter().fold(1.0f64, |m, c| m.max(c.abs())))
        .product();
    det(&rows1).signum_rel(scale) == det(&rows2).signum_rel(scale)
}

/// Joint colours after one refinement round, or `None` when the colour
/// histograms already differ.
fn prune_colours(g1: &GeometricGraph, g2: &GeometricGraph) -> Option<(Vec<u32>, Vec<u32>)> {
    let mut base: HashMap<(Vec<String>, usize), u32> = HashMap::new();
    let mut base_of = |g: &GeometricGraph| -> Vec<u32> {
        (0..g.len())
            .map(|i| {
                let key = (g.scalars(i).clone(), g.vectors(i).len());
                let next = base.len() as u32;
                *base.entry(key).or_insert(next)
            })
            .collect()
    };
    let b1 = base_of(g1);
    let b2 = base_of(g2);
    let mut refined: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
    let mut refine = |g: &GeometricGraph, b: &[u32]| -> Vec<u32> {
        (0..g.len())
            .map(|i| {
                let mut nb: Vec<u32> = g.neighbours(i).iter().map(|&j| b[j]).collect();
                nb.sort_unstable();
                let next = refined.len() as u32;
                *refined.entry((b[i], nb)).or_insert(next)
            })
            .collect()
    };
    let c1 = refine(g1, &b1);
    let c2 = refine(g2, &b2);
    let hist = |c: &[u32]| {
        let mut h = c.to_vec();
        h.sort_unstable();
        h
    };
    (hist(&c1) == hist(&c2)).then_some((c1, c2))
}

/// g1 nodes ordered by ascending candidate count, then index.
fn search_order(c1: &[u32], c2: &[u32]) -> Vec<usize> {
    let count = |c: u32| c2.iter().filter(|&&x| x == c).count();
    let mut order: Vec<usize> = (0..c1.len()).collect();
    order.sort_by_key(|&i| (count(c1[i]), i));
    order
}

/// Per node: centred position followed by vector features.
fn stacks(g: &GeometricGraph) -> Vec<Vec<Vector>> {
    let c = g.centroid();
    (0..g.len())
        .map(|i| {
            let mut s = vec![g.position(i).sub(&c)];
            s.extend(g.vectors(i).iter().cloned());
            s
        })
        .collect()
}

struct Search<'a> {
    g1: &'a GeometricGraph,
    g2: &'a GeometricGraph,
    c1: &'a [u32],
    c2: &'a [u32],
    s1: &'a [Vec<Vector>],
    s2: &'a [Vec<Vector>],
    order: Vec<usize>,
    mapping: Vec<usize>,
    used: Vec<bool>,
    check_geometry: bool,
    group: Option<GroupSpec>,
    found: Vec<Vec<usize>>,
    limit: usize,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if depth == self.order.len() {
            if self.accept() {
                self.found.push(self.mapping.clone());
            }
            return;
        }
        let i = self.order[depth];
        for j in 0..self.g2.len() {
            if self.used[j] || self.c1[i] != self.c2[j] {
                continue;
            }
            if !self.consistent(depth, i, j) {
                continue;
            }
            self.mapping[i] = j;
            self.used[j] = true;
            self.run(depth + 1);
            self.used[j] = false;
            self.mapping[i] = usize::MAX;
            if self.found.len() >= self.limit {
                return;
            }
        }
    }

    fn consistent(&self, depth: usize, i: usize, j: usize) -> bool {
        for &prev in &self.order[..depth] {
            let pj = self.mapping[prev];
            if self.g1.has_edge(i, prev) != self.g2.has_edge(j, pj) {
                return false;
            }
        }
        if !self.check_geometry {
            return true;
        }
        let (a, b) = (&self.s1[i], &self.s2[j]);
        for (x, y) in a.iter().zip(b) {
            for (x2, y2) in a.iter().zip(b) {
                if x.dot(x2) != y.dot(y2) {
                    return false;
                }
            }
        }
        for &prev in &self.order[..depth] {
            let (pa, pb) = (&self.s1[prev], &self.s2[self.mapping[prev]]);
            for (x, y) in a.iter().zip(b) {
                for (x2, y2) in pa.iter().zip(pb) {
                    if x.dot(x2) != y.dot(y2) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn accept(&self) -> bool {
        let Some(group) = self.group else {
            return true;
        };
        if !self.check_geometry {
            return true;
        }
        let (l1, l2) = matched_lists(self.s1, self.s2, &self.mapping);
        orientation_agrees(&l1, &l2, group)
    }
}

fn matched_lists(s1: &[Vec<Vector>], s2: &[Vec<Vector>], mapping: &[usize]) -> (Vec<Vector>, Vec<Vector>) {
    let mut l1 = Vec::new();
    let mut l2 = Vec::new();
    for (i, &j) in mapping.iter().enumerate() {
        l1.extend(s1[i].iter().cloned());
        l2.extend(s2[j].iter().cloned());
    }
    (l1, l2)
}

fn build_witness(
    g1: &GeometricGraph,
    g2: &GeometricGraph,
    s1: &[Vec<Vector>],
    s2: &[Vec<Vector>],
    perm: &[usize],
    group: GroupSpec,
) -> IsometryWitness {
    let (l1, l2) = matched_lists(s1, s2, perm);
    let q = align_orthogonal(&l1, &l2, g1.dim(), group.is_rotation_only());
    // Witnesses use row vectors: x' = x R + t with R = Qᵀ.
    let rotation = q.transpose();
    let translation = g2.centroid().sub(&rotation.apply_right(&g1.centroid()));
    IsometryWitness {
        permutation: perm.to_vec(),
        rotation,
        translation,
    }
}
