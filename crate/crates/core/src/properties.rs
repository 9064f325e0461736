//! Global geometric properties that a first-hop invariant test cannot see.

use serde::{Deserialize, Serialize};

use crate::error::{GwlError, Result};
use crate::graph::GeometricGraph;
use crate::linalg::Vector;
use crate::numeric::{Num, NumericMode};

/// Axis-aligned bounding box measures. `volume` is `None` in 2D, where
/// `area` is the box area; in 3D `area` is the surface area.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxMetrics {
    pub extents: Vec<Num>,
    pub perimeter: Num,
    pub area: Num,
    pub volume: Option<Num>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DihedralEntry {
    pub quadruple: [usize; 4],
    /// Cosine in float mode; signed squared cosine in exact mode.
    pub value: Num,
}

/// Everything `props` reports for one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub dim: usize,
    pub numeric: NumericMode,
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    pub bounding_box: Option<BoxMetrics>,
    pub centroid: Vector,
    /// Sorted squared distances from the centroid.
    pub centroid_distances_sq: Vec<Num>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub dihedrals: Vec<DihedralEntry>,
}

pub fn extents(g: &GeometricGraph) -> Vec<Num> {
    (0..g.dim())
        .map(|a| {
            let mut it = g.positions().iter().map(|p| &p[a]);
            let Some(first) = it.next() else {
                return Num::zero(g.mode());
            };
            let (lo, hi) = it.fold((first, first), |(lo, hi), x| {
                (
                    if x.total_cmp(lo).is_lt() { x } else { lo },
                    if x.total_cmp(hi).is_gt() { x } else { hi },
                )
            });
            hi - lo
        })
        .collect()
}

/// Perimeter (total edge length), area and volume of the axis-aligned box.
pub fn bounding_box_metrics(g: &GeometricGraph) -> Result<BoxMetrics> {
    let e = extents(g);
    let m = g.mode();
    match g.dim() {
        2 => {
            let (a, b) = (&e[0], &e[1]);
            Ok(BoxMetrics {
                perimeter: Num::from_i64(2, m) * (a + b),
                area: a * b,
                volume: None,
                extents: e.clone(),
            })
        }
        3 => {
            let (a, b, c) = (&e[0], &e[1], &e[2]);
            Ok(BoxMetrics {
                perimeter: Num::from_i64(4, m) * (&(a + b) + c),
                area: Num::from_i64(2, m) * (&(&(a * b) + &(b * c)) + &(c * a)),
                volume: Some(&(a * b) * c),
                extents: e.clone(),
            })
        }
        d => Err(GwlError::UnsupportedDimension(d)),
    }
}

/// Sorted squared distances of every node from the centroid.
pub fn centroid_distance_multiset(g: &GeometricGraph) -> Result<Vec<Num>> {
    if g.is_empty() {
        return Err(GwlError::EmptyInput);
    }
    let c = g.centroid();
    let mut out: Vec<Num> = g.positions().iter().map(|p| p.sub(&c).norm2()).collect();
    out.sort_by(Num::total_cmp);
    Ok(out)
}

/// Dihedral angle between the planes `(l, j, k)` and `(j, k, m)` about the
/// axis `x_jk = x_j - x_k`:
/// `((x_jk × x_lj) · (x_jk × x_mk)) / (|x_jk × x_lj| |x_jk × x_mk|)`.
///
/// Exact graphs get the signed square of the cosine so the result stays
/// rational.
pub fn dihedral_cos(g: &GeometricGraph, l: usize, j: usize, k: usize, m: usize) -> Result<Num> {
    if g.dim() != 3 {
        return Err(GwlError::UnsupportedDimension(g.dim()));
    }
    for i in [l, j, k, m] {
        if i >= g.len() {
            return Err(GwlError::InvalidParameter(format!("node {i} out of range")));
        }
    }
    let jk = g.relative(j, k);
    let n1 = jk.cross(&g.relative(l, j));
    let n2 = jk.cross(&g.relative(m, k));
    if n1.is_zero() || n2.is_zero() {
        return Err(GwlError::Degenerate(format!(
            "collinear triple in dihedral ({l}, {j}, {k}, {m})"
        )));
    }
    let dot = n1.dot(&n2);
    let denom = &n1.norm2() * &n2.norm2();
    Ok(match g.mode() {
        NumericMode::Exact => {
            let sq = &dot.square() / &denom;
            if dot.signum() < 0 {
                -sq
            } else {
                sq
            }
        }
        NumericMode::Float => Num::float(dot.to_f64() / denom.to_f64().sqrt()),
    })
}

/// Full report; box metrics are omitted in 1D and dihedrals outside 3D.
pub fn property_report(g: &GeometricGraph, quadruples: &[[usize; 4]]) -> Result<PropertyReport> {
    let dihedrals = quadruples
        .iter()
        .map(|&q| {
            Ok(DihedralEntry {
                quadruple: q,
                value: dihedral_cos(g, q[0], q[1], q[2], q[3])?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PropertyReport {
        dim: g.dim(),
        numeric: g.mode(),
        bounding_box: if g.dim() >= 2 { Some(bounding_box_metrics(g)?) } else { None },
        centroid: g.centroid(),
        centroid_distances_sq: centroid_distance_multiset(g)?,
        dihedrals,
    })
}
