//! Exact orbit equality of geometric objects.
//!
//! Two objects are in the same orbit iff some orthogonal `Q` (with `det = +1`
//! under `SO` when the vectors span the space) maps one onto the other,
//! children matched as multisets at every level. Instead of enumerating
//! child correspondences, the search enumerates where `Q` can send a basis:
//! every vector of an object has a signature that any structure-preserving
//! correspondence must respect (leaf colour and slot, or depth, centre colour
//! and child colour of a relative position). A maximal independent set of
//! `o1`'s vectors is picked from the signatures with the fewest candidate
//! images in `o2`, images are enumerated subject to norms and mutual inner
//! products, and each candidate linear map is verified by transforming `o1`
//! and comparing it structurally with `o2`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use log::warn;

use super::object::{transform_memo, Colour, GeometricObject};
use crate::error::{GwlError, Result};
use crate::graph::GroupSpec;
use crate::linalg::{det, greedy_basis_by, span_map, Vector};
use crate::numeric::Num;

static FRAGILE: AtomicUsize = AtomicUsize::new(0);

/// Number of float comparisons so far whose operands were within `10ε` of
/// the equality threshold.
pub fn fragile_comparisons() -> usize {
    FRAGILE.load(Ordering::Relaxed)
}

pub(crate) fn eq_watch(a: &Num, b: &Num) -> bool {
    if a.near_boundary(b) && FRAGILE.fetch_add(1, Ordering::Relaxed) == 0 {
        warn!("float comparison within 10 tolerances of the equality threshold; orbit separation may be unreliable");
    }
    a == b
}

pub(crate) fn vec_eq(a: &Vector, b: &Vector) -> bool {
    a.dim() == b.dim() && a.0.iter().zip(&b.0).all(|(x, y)| eq_watch(x, y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Signature {
    Leaf { colour: Colour, slot: usize },
    Rel { depth: usize, centre: Colour, child: Colour },
}

struct Entry {
    sig: Signature,
    vector: Vector,
    norm2: Num,
}

fn entries(o: &GeometricObject) -> Vec<Entry> {
    let mut out: Vec<Entry> = Vec::new();
    o.for_each_distinct(|sub| match sub {
        GeometricObject::Leaf { colour, vectors } => {
            for (slot, v) in vectors.iter().enumerate() {
                out.push(Entry {
                    sig: Signature::Leaf {
                        colour: *colour,
                        slot,
                    },
                    norm2: v.norm2(),
                    vector: v.clone(),
                });
            }
        }
        GeometricObject::Node {
            depth,
            centre_colour,
            children,
            ..
        } => {
            for c in children {
                out.push(Entry {
                    sig: Signature::Rel {
                        depth: *depth,
                        centre: *centre_colour,
                        child: c.colour,
                    },
                    norm2: c.rel.norm2(),
                    vector: c.rel.clone(),
                });
            }
        }
    });
    out.sort_by(|a, b| a.sig.cmp(&b.sig).then_with(|| a.vector.total_cmp(&b.vector)));
    out.dedup_by(|a, b| a.sig == b.sig && a.vector == b.vector);
    out
}

/// Whether `o1` and `o2` lie in the same orbit under `group`.
pub fn orbit_equal(o1: &Arc<GeometricObject>, o2: &Arc<GeometricObject>, group: GroupSpec) -> Result<bool> {
    let k1 = o1.geometry_kind()?;
    let k2 = o2.geometry_kind()?;
    for (d, _) in k1.iter().chain(k2.iter()) {
        if *d != group.dim {
            return Err(GwlError::DimensionMismatch {
                expected: group.dim,
                found: *d,
            });
        }
    }
    if let (Some((_, m1)), Some((_, m2))) = (k1, k2) {
        if m1 != m2 {
            return Err(GwlError::ModeMismatch(m1, m2));
        }
    }
    if !same_skeleton(o1, o2) {
        return Ok(false);
    }
    let n1 = o1.top_norms();
    let n2 = o2.top_norms();
    if n1.len() != n2.len() || n1.iter().zip(&n2).any(|(a, b)| !eq_watch(a, b)) {
        return Ok(false);
    }

    let e1 = entries(o1);
    let e2 = entries(o2);
    let mut by_sig: HashMap<Signature, Vec<&Entry>> = HashMap::new();
    for e in &e2 {
        by_sig.entry(e.sig).or_default().push(e);
    }
    let candidates = |e: &Entry| -> Vec<&Vector> {
        by_sig
            .get(&e.sig)
            .map(|v| {
                v.iter()
                    .filter(|c| eq_watch(&c.norm2, &e.norm2))
                    .map(|c| &c.vector)
                    .collect()
            })
            .unwrap_or_default()
    };

    let mut ranked: Vec<(usize, &Entry)> = Vec::with_capacity(e1.len());
    for e in &e1 {
        let n = candidates(e).len();
        if n == 0 {
            return Ok(false);
        }
        ranked.push((n, e));
    }
    ranked.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.sig.cmp(&b.1.sig))
            .then_with(|| a.1.vector.total_cmp(&b.1.vector))
    });
    let picked = greedy_basis_by(ranked.len(), |i| &ranked[i].1.vector);
    let basis: Vec<&Entry> = picked.iter().map(|&i| ranked[i].1).collect();
    let rank2 = greedy_basis_by(e2.len(), |i| &e2[i].vector).len();
    if rank2 != basis.len() {
        return Ok(false);
    }
    let options: Vec<Vec<&Vector>> = basis.iter().map(|e| candidates(e)).collect();
    let from: Vec<Vector> = basis.iter().map(|e| e.vector.clone()).collect();

    let mut search = BasisSearch {
        o1,
        o2,
        group,
        from: &from,
        options: &options,
        images: Vec::with_capacity(from.len()),
    };
    Ok(search.run())
}

struct BasisSearch<'a> {
    o1: &'a Arc<GeometricObject>,
    o2: &'a Arc<GeometricObject>,
    group: GroupSpec,
    from: &'a [Vector],
    options: &'a [Vec<&'a Vector>],
    images: Vec<Vector>,
}

impl BasisSearch<'_> {
    fn run(&mut self) -> bool {
        let k = self.images.len();
        if k == self.from.len() {
            return self.verify();
        }
        for cand in &self.options[k] {
            let ok = (0..k).all(|m| eq_watch(&self.from[k].dot(&self.from[m]), &cand.dot(&self.images[m])));
            if !ok {
                continue;
            }
            self.images.push((*cand).clone());
            if self.run() {
                return true;
            }
            self.images.pop();
        }
        false
    }

    fn verify(&self) -> bool {
        let dim = self.group.dim;
        if self.group.is_rotation_only() && self.from.len() == dim {
            let scale: f64 = self
                .from
                .iter()
                .map(|v| v.to_f64s().iter().fold(1.0f64, |m, c| m.max(c.abs())))
                .product();
            if det(self.from).signum_rel(scale) != det(&self.images).signum_rel(scale) {
                return false;
            }
        }
        let Some(m) = span_map(self.from, &self.images, dim) else {
            return false;
        };
        let mapped = transform_memo(self.o1, &m, &mut HashMap::new());
        let mut memo = HashMap::new();
        structurally_equal(&mapped, self.o2, &mut memo)
    }
}

fn same_skeleton(a: &GeometricObject, b: &GeometricObject) -> bool {
    if a.depth() != b.depth() || a.own_colour() != b.own_colour() {
        return false;
    }
    match (a, b) {
        (GeometricObject::Leaf { vectors: va, .. }, GeometricObject::Leaf { vectors: vb, .. }) => {
            va.len() == vb.len()
        }
        (
            GeometricObject::Node { children: ca, .. },
            GeometricObject::Node { children: cb, .. },
        ) => {
            let mut x: Vec<Colour> = ca.iter().map(|c| c.colour).collect();
            let mut y: Vec<Colour> = cb.iter().map(|c| c.colour).collect();
            x.sort_unstable();
            y.sort_unstable();
            x == y
        }
        _ => false,
    }
}

/// Equality of two objects without any group action, children compared as
/// multisets.
pub(crate) fn structurally_equal(
    a: &Arc<GeometricObject>,
    b: &Arc<GeometricObject>,
    memo: &mut HashMap<(usize, usize), bool>,
) -> bool {
    if Arc::ptr_eq(a, b) {
        return true;
    }
    let key = (Arc::as_ptr(a) as usize, Arc::as_ptr(b) as usize);
    if let Some(&r) = memo.get(&key) {
        return r;
    }
    let r = match (a.as_ref(), b.as_ref()) {
        (
            GeometricObject::Leaf {
                colour: c1,
                vectors: v1,
            },
            GeometricObject::Leaf {
                colour: c2,
                vectors: v2,
            },
        ) => c1 == c2 && v1.len() == v2.len() && v1.iter().zip(v2).all(|(x, y)| vec_eq(x, y)),
        (
            GeometricObject::Node {
                depth: d1,
                centre_colour: k1,
                centre: z1,
                children: ch1,
            },
            GeometricObject::Node {
                depth: d2,
                centre_colour: k2,
                centre: z2,
                children: ch2,
            },
        ) => {
            d1 == d2
                && k1 == k2
                && ch1.len() == ch2.len()
                && structurally_equal(z1, z2, memo)
                && {
                    let mut used = vec![false; ch2.len()];
                    ch1.iter().all(|c| {
                        let hit = ch2.iter().enumerate().position(|(j, d)| {
                            !used[j]
                                && c.colour == d.colour
                                && vec_eq(&c.rel, &d.rel)
                                && structurally_equal(&c.object, &d.object, memo)
                        });
                        match hit {
                            Some(j) => {
                                used[j] = true;
                                true
                            }
                            None => false,
                        }
                    })
                }
        }
        _ => false,
    };
    memo.insert(key, r);
    r
}
