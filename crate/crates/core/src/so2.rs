//! Fixed-size orientation encoding for planar multisets under `SO(2)`.
//!
//! A finite multiset `X` of 2-vectors that is not all zeros has a finite
//! cyclic stabiliser of some order `L`, generated by the rotation through
//! `θ = 2π/L`. Rotating `X` by `β` moves it along its orbit, and the orbit
//! point is recorded as the angle `α ∈ [0, θ)` of the smallest rotation that
//! carries the registered orbit representative onto `X`. The hash is the
//! 2-vector of length `1 + orbit index` at angle `α·L`; rotating `X` by `β`
//! rotates the hash by `β·L`, i.e. the hash transforms under the `L`-th
//! frequency representation of `SO(2)`.
//!
//! Messages produced by the refinement loop transform with different
//! frequencies, so internally every vector carries the frequency `n` at which
//! it rotates (`R_{nβ}` when the input is rotated by `β`). Plain inputs have
//! frequency 1.

use std::collections::HashMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::canon::{Colour, OrbitRegistry};
use crate::engines::{default_geometric_cap, RefinementTrace, Verdict};
use crate::error::{GwlError, Result};
use crate::graph::{GeometricGraph, GroupSpec};
use crate::linalg::Vector;
use crate::numeric::{tolerance, NumericMode};

/// Rotational stabiliser of a planar multiset.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum StabilizerInfo {
    /// Cyclic of this order, generated by rotation through `2π / order`.
    Finite { order: u32 },
    /// Every rotation fixes the multiset (all points at the origin).
    Continuous,
}

impl StabilizerInfo {
    pub fn generator_angle(&self) -> Option<f64> {
        match self {
            StabilizerInfo::Finite { order } => Some(TAU / *order as f64),
            StabilizerInfo::Continuous => None,
        }
    }
}

/// Output of [`so2_hash`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct So2Hash {
    pub vector: [f64; 2],
    /// Orbit code, `1 + registry index`.
    pub norm: f64,
    /// Angle of `vector` in `[0, 2π)`.
    pub angle: f64,
    /// Frequency at which the hash rotates: the stabiliser order, or 0 when
    /// the stabiliser is continuous.
    pub frequency: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Tagged {
    freq: u32,
    v: [f64; 2],
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= tolerance() * a.abs().max(b.abs()).max(1.0)
}

fn close2(a: [f64; 2], b: [f64; 2]) -> bool {
    close(a[0], b[0]) && close(a[1], b[1])
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0] * v[0] + v[1] * v[1]
}

fn is_zero(v: [f64; 2]) -> bool {
    close(v[0], 0.0) && close(v[1], 0.0)
}

fn rotate(v: [f64; 2], angle: f64) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Rotations carrying one tagged multiset onto another.
#[derive(Clone, Debug, PartialEq)]
enum Rotations {
    None,
    All,
    /// Sorted angles in `[0, 2π)`.
    Finite(Vec<f64>),
}

fn matches_under(rep: &[Tagged], x: &[Tagged], beta: f64) -> bool {
    let mut used = vec![false; x.len()];
    rep.iter().all(|y| {
        let target = rotate(y.v, y.freq as f64 * beta);
        let hit = x
            .iter()
            .enumerate()
            .position(|(k, c)| !used[k] && c.freq == y.freq && close2(c.v, target));
        match hit {
            Some(k) => {
                used[k] = true;
                true
            }
            None => false,
        }
    })
}

fn pivot(rep: &[Tagged]) -> Option<Tagged> {
    rep.iter()
        .filter(|t| t.freq > 0 && !is_zero(t.v))
        .copied()
        .max_by(|a, b| {
            norm2(a.v)
                .total_cmp(&norm2(b.v))
                .then_with(|| b.freq.cmp(&a.freq))
        })
}

fn find_rotations(rep: &[Tagged], x: &[Tagged]) -> Rotations {
    if rep.len() != x.len() {
        return Rotations::None;
    }
    let Some(p) = pivot(rep) else {
        return if matches_under(rep, x, 0.0) {
            Rotations::All
        } else {
            Rotations::None
        };
    };
    let pa = p.v[1].atan2(p.v[0]);
    let n = p.freq as f64;
    let mut found: Vec<f64> = Vec::new();
    for c in x {
        if c.freq != p.freq || !close(norm2(c.v), norm2(p.v)) {
            continue;
        }
        let delta = c.v[1].atan2(c.v[0]) - pa;
        for j in 0..p.freq {
            let beta = wrap((delta + TAU * j as f64) / n);
            let dup = found.iter().any(|&b| {
                let d = (b - beta).abs();
                d.min(TAU - d) <= 1e3 * tolerance()
            });
            if !dup && matches_under(rep, x, beta) {
                found.push(beta);
            }
        }
    }
    if found.is_empty() {
        Rotations::None
    } else {
        found.sort_by(f64::total_cmp);
        Rotations::Finite(found)
    }
}

fn stabilizer_of(x: &[Tagged]) -> StabilizerInfo {
    match find_rotations(x, x) {
        Rotations::All | Rotations::None => StabilizerInfo::Continuous,
        Rotations::Finite(angles) => StabilizerInfo::Finite {
            order: angles.len() as u32,
        },
    }
}

fn plain(x: &[[f64; 2]]) -> Vec<Tagged> {
    x.iter().map(|&v| Tagged { freq: 1, v }).collect()
}

/// Order of the rotational stabiliser of `x`.
pub fn stabilizer_order(x: &[[f64; 2]]) -> Result<StabilizerInfo> {
    if x.is_empty() {
        return Err(GwlError::EmptyInput);
    }
    Ok(stabilizer_of(&plain(x)))
}

/// Registry of orbit representatives for [`so2_hash`].
#[derive(Debug, Default)]
pub struct So2Registry {
    reps: Vec<Vec<Tagged>>,
    index: HashMap<Vec<u32>, Vec<usize>>,
}

impl So2Registry {
    pub fn new() -> So2Registry {
        So2Registry::default()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    fn hash_tagged(&mut self, x: &[Tagged]) -> So2Hash {
        let mut key: Vec<u32> = x.iter().map(|t| t.freq).collect();
        key.sort_unstable();
        let mut norms: Vec<(u32, f64)> = x.iter().map(|t| (t.freq, norm2(t.v))).collect();
        norms.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut hit = None;
        if let Some(bucket) = self.index.get(&key) {
            for &idx in bucket {
                let rep = &self.reps[idx];
                let mut rn: Vec<(u32, f64)> = rep.iter().map(|t| (t.freq, norm2(t.v))).collect();
                rn.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
                if rn.iter().zip(&norms).any(|(a, b)| a.0 != b.0 || !close(a.1, b.1)) {
                    continue;
                }
                let r = find_rotations(rep, x);
                if r != Rotations::None {
                    hit = Some((idx, r));
                    break;
                }
            }
        }
        let (idx, rotations) = match hit {
            Some(h) => h,
            None => {
                let idx = self.reps.len();
                self.reps.push(x.to_vec());
                self.index.entry(key).or_default().push(idx);
                (idx, find_rotations(x, x))
            }
        };
        let norm = 1.0 + idx as f64;
        let (angle, frequency) = match rotations {
            Rotations::Finite(angles) => {
                let order = angles.len() as u32;
                (wrap(angles[0] * order as f64), order)
            }
            Rotations::All | Rotations::None => (0.0, 0),
        };
        So2Hash {
            vector: [norm * angle.cos(), norm * angle.sin()],
            norm,
            angle,
            frequency,
        }
    }
}

/// Orbit-injective, rotation-equivariant hash of a planar multiset.
pub fn so2_hash(x: &[[f64; 2]], reg: &mut So2Registry) -> So2Hash {
    reg.hash_tagged(&plain(x))
}

/// Plain coordinate sum: permutation invariant and equivariant under
/// rotations about the origin, hence zero on any cloud with a nontrivial
/// rotational symmetry about the origin.
pub fn equivariant_sum_demo(x: &[[f64; 2]]) -> [f64; 2] {
    x.iter().fold([0.0, 0.0], |acc, v| [acc[0] + v[0], acc[1] + v[1]])
}

/// Positions of a 2D graph as float pairs.
pub fn planar_points(g: &GeometricGraph) -> Result<Vec<[f64; 2]>> {
    if g.dim() != 2 {
        return Err(GwlError::UnsupportedDimension(g.dim()));
    }
    Ok(g.positions().iter().map(planar).collect())
}

fn planar(v: &Vector) -> [f64; 2] {
    [v[0].to_f64(), v[1].to_f64()]
}

/// `SO(2)` refinement with fixed-size messages.
///
/// Iteration 0 compares scalar colours. Iteration 1 forms one message per
/// edge, the hash of the relative position rescaled by a code of the scalar
/// pair and the edge's orbit, and hashes each node's edge messages.
/// Each later iteration hashes the multiset of neighbour messages. Colours
/// are the message norms. Like GWL, runs to the cap (default larger
/// diameter + 1) unless histograms differ.
pub fn run_so2_gwl(
    g1: &GeometricGraph,
    g2: &GeometricGraph,
    max_iters: Option<usize>,
) -> Result<(Verdict, RefinementTrace)> {
    for g in [g1, g2] {
        if g.dim() != 2 {
            return Err(GwlError::UnsupportedDimension(g.dim()));
        }
    }
    let cap = crate::engines::check_cap(max_iters, default_geometric_cap(g1, g2))?;
    let graphs = [g1.in_mode(NumericMode::Float), g2.in_mode(NumericMode::Float)];
    let mut colours = OrbitRegistry::new(GroupSpec::special(2));
    let mut orbits = So2Registry::new();
    let mut edge_codes: HashMap<(Colour, Colour, u32), u32> = HashMap::new();

    let initial: Vec<Colour> = graphs
        .iter()
        .flat_map(|g| (0..g.len()).map(move |i| g.scalars(i)))
        .map(|s| colours.intern_scalars(s))
        .collect();
    let scalar_colours = initial.clone();
    let mut messages: Vec<Tagged> = Vec::new();

    crate::engines::drive(g1.len(), initial, cap, false, |t, _prev| {
        let mut next = Vec::with_capacity(scalar_colours.len());
        let mut offset = 0;
        for g in &graphs {
            for v in 0..g.len() {
                let inputs: Vec<Tagged> = if t == 1 {
                    g.neighbours(v)
                        .iter()
                        .map(|&u| {
                            let rel = planar(&g.relative(v, u));
                            let h = orbits.hash_tagged(&[Tagged { freq: 1, v: rel }]);
                            let key = (scalar_colours[offset + v], scalar_colours[offset + u], h.norm as u32);
                            let fresh = edge_codes.len() as u32;
                            let scale = 1.0 + *edge_codes.entry(key).or_insert(fresh) as f64;
                            Tagged {
                                freq: h.frequency,
                                v: [scale * h.angle.cos(), scale * h.angle.sin()],
                            }
                        })
                        .collect()
                } else {
                    g.neighbours(v).iter().map(|&u| messages[offset + u]).collect()
                };
                let h = orbits.hash_tagged(&inputs);
                next.push(Tagged {
                    freq: h.frequency,
                    v: h.vector,
                });
            }
            offset += g.len();
        }
        let out = next
            .iter()
            .map(|m| {
                let code = (m.v[0].hypot(m.v[1]) - 1.0).round() as u32;
                colours.intern_key(vec![t as u32, code])
            })
            .collect();
        messages = next;
        Ok(out)
    })
}
