//! Synthetic graph families with claims that are checked against the oracle.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GwlError, Result};
use crate::graph::{apply_isometry, build_radial_graph, GeometricGraph, GroupSpec, IsometryWitness, PointRecord};
use crate::linalg::Vector;
use crate::numeric::{Num, NumericMode};
use crate::oracle::{geometric_isomorphism_oracle_with_cap, DEFAULT_ORACLE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Kchain,
    Lfold,
    TriHex,
    OnehopIdentical,
    Random,
    File,
}

/// What a generated pair is claimed to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Relation {
    /// Non-isomorphic, every `(h-1)`-hop neighbourhood has a congruent
    /// counterpart, and some `h`-hop neighbourhood does not.
    NonIsomorphicHopDistinct(usize),
    NonIsomorphic,
    Isomorphic,
    Unknown,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::NonIsomorphicHopDistinct(h) => write!(f, "non_isomorphic_h_hop_distinct({h})"),
            Relation::NonIsomorphic => f.write_str("non_isomorphic"),
            Relation::Isomorphic => f.write_str("isomorphic"),
            Relation::Unknown => f.write_str("unknown"),
        }
    }
}

impl FromStr for Relation {
    type Err = GwlError;

    fn from_str(s: &str) -> Result<Relation> {
        match s {
            "non_isomorphic" => Ok(Relation::NonIsomorphic),
            "isomorphic" => Ok(Relation::Isomorphic),
            "unknown" => Ok(Relation::Unknown),
            _ => s
                .strip_prefix("non_isomorphic_h_hop_distinct(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|h| h.parse().ok())
                .map(Relation::NonIsomorphicHopDistinct)
                .ok_or_else(|| GwlError::InvalidParameter(format!("unknown relation {s:?}"))),
        }
    }
}

impl From<Relation> for String {
    fn from(r: Relation) -> String {
        r.to_string()
    }
}

impl TryFrom<String> for Relation {
    type Error = GwlError;
    fn try_from(s: String) -> Result<Relation> {
        s.parse()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

/// Provenance and claim of a generated pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub family: Family,
    pub params: PairParams,
    pub claimed: Relation,
    /// `Some(result)` when the oracle checked the claim, `None` when the pair
    /// was too large to check.
    pub verified: Option<bool>,
}

pub type GeneratedPair = (GeometricGraph, GeometricGraph, PairSpec);

/// The pair of k-chains: `k` inner nodes on the x axis, endpoints above the
/// first and last inner node's outer neighbours, both up in the first graph
/// and one up, one down in the second. Edges by cutoff 3/2.
pub fn gen_kchain(k: usize) -> Result<GeneratedPair> {
    if k < 2 {
        return Err(GwlError::InvalidParameter(format!("k-chain needs k >= 2, got {k}")));
    }
    let build = |last_y: i64| {
        let mut pts = vec![PointRecord::at(Vector::from_ints(&[0, 1, 0]))];
        pts.extend((1..=k as i64).map(|x| PointRecord::at(Vector::from_ints(&[x, 0, 0]))));
        pts.push(PointRecord::at(Vector::from_ints(&[k as i64 + 1, last_y, 0])));
        build_radial_graph(pts, &Num::ratio(3, 2))
    };
    let (g1, g2) = (build(1)?, build(-1)?);
    let claimed = Relation::NonIsomorphicHopDistinct(k / 2 + 1);
    let verified = verify_if_small(&g1, &g2, claimed)?;
    Ok((
        g1,
        g2,
        PairSpec {
            family: Family::Kchain,
            params: PairParams {
                k: Some(k),
                ..Default::default()
            },
            claimed,
            verified,
        },
    ))
}

/// A centre at the origin joined to arm nodes on the unit circle at angles
/// `alpha + 2πm/l` for `m < arms`. Exact coordinates when `alpha = 0` and
/// `l ∈ {1, 2, 4}`, float otherwise. `dim = 3` embeds in the `z = 0` plane.
pub fn gen_lfold(l: usize, alpha: f64, arms: usize, dim: usize) -> Result<GeometricGraph> {
    if l == 0 || arms == 0 || arms > l {
        return Err(GwlError::InvalidParameter(format!(
            "need 1 <= arms <= L, got L = {l}, arms = {arms}"
        )));
    }
    if dim != 2 && dim != 3 {
        return Err(GwlError::UnsupportedDimension(dim));
    }
    let exact = alpha == 0.0 && matches!(l, 1 | 2 | 4);
    let mut pts = vec![if exact { Vector::from_ints(&[0, 0]) } else { Vector::from_f64s(&[0.0, 0.0]) }];
    for m in 0..arms {
        pts.push(if exact {
            const UNIT: [[i64; 2]; 4] = [[1, 0], [0, 1], [-1, 0], [0, -1]];
            Vector::from_ints(&UNIT[m * 4 / l])
        } else {
            let a = alpha + TAU * m as f64 / l as f64;
            Vector::from_f64s(&[a.cos(), a.sin()])
        });
    }
    let edges: Vec<(usize, usize)> = (1..=arms).map(|j| (0, j)).collect();
    GeometricGraph::from_positions(2, pts, &edges)?.embed(dim)
}

/// Two unit triangles versus a unit hexagon, uniform scalars, float mode.
pub fn gen_triangles_vs_hexagon() -> Result<GeneratedPair> {
    let h = 3f64.sqrt() / 2.0;
    let tri = [[0.0, 0.0], [1.0, 0.0], [0.5, h]];
    let mut pts: Vec<Vector> = tri.iter().map(|p| Vector::from_f64s(p)).collect();
    pts.extend(tri.iter().map(|p| Vector::from_f64s(&[p[0] + 3.0, p[1]])));
    let g1 = GeometricGraph::from_positions(2, pts, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])?;
    let hex: Vec<Vector> = (0..6)
        .map(|m| {
            let a = PI / 3.0 * m as f64;
            Vector::from_f64s(&[a.cos(), a.sin()])
        })
        .collect();
    let g2 = GeometricGraph::from_positions(2, hex, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])?;
    let claimed = Relation::NonIsomorphicHopDistinct(1);
    let verified = verify_if_small(&g1, &g2, claimed)?;
    Ok((
        g1,
        g2,
        PairSpec {
            family: Family::TriHex,
            params: PairParams::default(),
            claimed,
            verified,
        },
    ))
}

/// The 2-chain pair with nodes relabelled in reverse order: non-isomorphic
/// although every 1-hop neighbourhood has a congruent counterpart.
pub fn gen_onehop_identical_pair() -> Result<GeneratedPair> {
    let (g1, g2, _) = gen_kchain(2)?;
    let n = g1.len();
    let relabel = IsometryWitness {
        permutation: (0..n).rev().collect(),
        ..IsometryWitness::identity(n, 3, NumericMode::Exact)
    };
    let (g1, g2) = (apply_isometry(&g1, &relabel)?, apply_isometry(&g2, &relabel)?);
    let claimed = Relation::NonIsomorphicHopDistinct(2);
    let verified = verify_if_small(&g1, &g2, claimed)?;
    Ok((
        g1,
        g2,
        PairSpec {
            family: Family::OnehopIdentical,
            params: PairParams::default(),
            claimed,
            verified,
        },
    ))
}

/// Seeded random cloud, optionally with radial-cutoff edges.
pub fn gen_random_cloud(n: usize, dim: usize, seed: u64, mode: NumericMode, cutoff: Option<&Num>) -> Result<GeometricGraph> {
    if n == 0 {
        return Err(GwlError::InvalidParameter("n must be at least 1".into()));
    }
    if !(1..=3).contains(&dim) {
        return Err(GwlError::UnsupportedDimension(dim));
    }
    let pts = crate::random::random_points(&mut crate::random::rng(seed), n, dim, mode);
    match cutoff {
        Some(r) => build_radial_graph(pts.into_iter().map(PointRecord::at).collect(), r),
        None => GeometricGraph::from_positions(dim, pts, &[]),
    }
}

/// Loads a pair file. The relation is settled by the oracle under `O(d)`
/// when both graphs fit under the oracle cap, and left unknown otherwise.
pub fn load_counterexample(path: impl AsRef<Path>) -> Result<GeneratedPair> {
    let (g1, g2) = crate::io::read_pair(path.as_ref())?;
    let (claimed, verified) = if g1.len().max(g2.len()) <= DEFAULT_ORACLE_CAP {
        let (iso, _) = geometric_isomorphism_oracle_with_cap(&g1, &g2, GroupSpec::orthogonal(g1.dim()), DEFAULT_ORACLE_CAP)?;
        (if iso { Relation::Isomorphic } else { Relation::NonIsomorphic }, Some(true))
    } else {
        (Relation::Unknown, None)
    };
    let spec = PairSpec {
        family: Family::File,
        params: PairParams {
            path: Some(path.as_ref().display().to_string()),
            ..Default::default()
        },
        claimed,
        verified,
    };
    Ok((g1, g2, spec))
}

/// Whether the nodes of the two graphs can be paired so that paired nodes
/// have congruent rooted `h`-hop neighbourhoods (induced subgraphs on the
/// ball, root marked).
pub fn hop_identical(g1: &GeometricGraph, g2: &GeometricGraph, h: usize, group: GroupSpec) -> Result<bool> {
    if g1.len() != g2.len() {
        return Ok(false);
    }
    let b1: Vec<GeometricGraph> = (0..g1.len()).map(|i| rooted_ball(g1, i, h)).collect::<Result<_>>()?;
    let b2: Vec<GeometricGraph> = (0..g2.len()).map(|i| rooted_ball(g2, i, h)).collect::<Result<_>>()?;
    let mut ok = vec![vec![false; b2.len()]; b1.len()];
    for (i, a) in b1.iter().enumerate() {
        for (j, b) in b2.iter().enumerate() {
            ok[i][j] = geometric_isomorphism_oracle_with_cap(a, b, group, a.len().max(b.len()))?.0;
        }
    }
    Ok(perfect_matching(&ok))
}

fn rooted_ball(g: &GeometricGraph, root: usize, h: usize) -> Result<GeometricGraph> {
    let mut nodes = vec![root];
    nodes.extend(g.hop_ball(root, h).into_iter().filter(|&u| u != root));
    let ball = g.induced(&nodes);
    let scalars: Vec<Vec<String>> = (0..ball.len())
        .map(|i| {
            let mut s = ball.scalars(i).clone();
            s.push(if i == 0 { "root" } else { "" }.into());
            s
        })
        .collect();
    ball.with_scalars(scalars)
}

fn perfect_matching(ok: &[Vec<bool>]) -> bool {
    fn augment(i: usize, ok: &[Vec<bool>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for j in 0..owner.len() {
            if ok[i][j] && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|o| augment(o, ok, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; ok.first().map_or(0, Vec::len)];
    (0..ok.len()).all(|i| augment(i, ok, &mut vec![false; owner.len()], &mut owner))
}

/// Checks a claimed relation with the oracle under `O(d)`.
pub fn verify_relation(g1: &GeometricGraph, g2: &GeometricGraph, claim: Relation) -> Result<bool> {
    let group = GroupSpec::orthogonal(g1.dim());
    let cap = g1.len().max(g2.len());
    let iso = geometric_isomorphism_oracle_with_cap(g1, g2, group, cap)?.0;
    Ok(match claim {
        Relation::Isomorphic => iso,
        Relation::NonIsomorphic => !iso,
        Relation::NonIsomorphicHopDistinct(h) => {
            !iso && h >= 1 && hop_identical(g1, g2, h - 1, group)? && !hop_identical(g1, g2, h, group)?
        }
        Relation::Unknown => true,
    })
}

fn verify_if_small(g1: &GeometricGraph, g2: &GeometricGraph, claim: Relation) -> Result<Option<bool>> {
    if g1.len().max(g2.len()) > DEFAULT_ORACLE_CAP {
        return Ok(None);
    }
    verify_relation(g1, g2, claim).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_strings() {
        let r = Relation::NonIsomorphicHopDistinct(3);
        assert_eq!(r.to_string(), "non_isomorphic_h_hop_distinct(3)");
        assert_eq!("non_isomorphic_h_hop_distinct(3)".parse::<Relation>().unwrap(), r);
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"non_isomorphic_h_hop_distinct(3)\"");
    }

    #[test]
    fn kchain_shape() {
        let (g1, g2, spec) = gen_kchain(4).unwrap();
        assert_eq!((g1.len(), g2.len()), (6, 6));
        assert_eq!(g1.mode(), NumericMode::Exact);
        assert_eq!(g1.edges().len(), 5);
        assert_eq!(spec.claimed, Relation::NonIsomorphicHopDistinct(3));
        assert_eq!(spec.verified, Some(true));
        assert!(gen_kchain(1).is_err());
    }

    #[test]
    fn lfold_exact_cases() {
        let g = gen_lfold(4, 0.0, 4, 2).unwrap();
        assert_eq!(g.mode(), NumericMode::Exact);
        assert_eq!(g.position(2), &Vector::from_ints(&[0, 1]));
        assert_eq!(gen_lfold(3, 0.0, 3, 2).unwrap().mode(), NumericMode::Float);
        assert_eq!(gen_lfold(4, 0.0, 4, 3).unwrap().dim(), 3);
    }

    #[test]
    fn matching() {
        assert!(perfect_matching(&[vec![true, true], vec![true, false]]));
        assert!(!perfect_matching(&[vec![true, false], vec![true, false]]));
    }

    #[test]
    fn random_cloud_single_node() {
        let g = gen_random_cloud(1, 3, 5, NumericMode::Exact, Some(&Num::int(10))).unwrap();
        assert!(g.edges().is_empty());
    }
}
