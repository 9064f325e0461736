//! Geometric graphs, group specifications and isometries.

use std::collections::VecDeque;
use std::fmt;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{GwlError, Result};
use crate::linalg::{Matrix, Vector};
use crate::numeric::{Num, NumericMode};

/// Discrete per-node attribute tuple.
pub type Scalars = Vec<String>;

/// One input point for [`build_radial_graph`].
#[derive(Clone, Debug, PartialEq)]
pub struct PointRecord {
    pub scalars: Scalars,
    pub vectors: Vec<Vector>,
    pub position: Vector,
}

impl PointRecord {
    pub fn at(position: Vector) -> PointRecord {
        PointRecord {
            scalars: Vec::new(),
            vectors: Vec::new(),
            position,
        }
    }
}

/// An attributed graph with node positions and optional vector features.
///
/// Adjacency is simple (no self-loops, no multi-edges) and stored as sorted
/// neighbour lists. All positions and vector features share the graph's
/// dimension and numeric mode.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricGraph {
    dim: usize,
    mode: NumericMode,
    scalars: Vec<Scalars>,
    vectors: Vec<Vec<Vector>>,
    positions: Vec<Vector>,
    adjacency: Vec<Vec<usize>>,
}

impl GeometricGraph {
    pub fn new(
        dim: usize,
        scalars: Vec<Scalars>,
        vectors: Vec<Vec<Vector>>,
        positions: Vec<Vector>,
        edges: &[(usize, usize)],
    ) -> Result<GeometricGraph> {
        if !(1..=3).contains(&dim) {
            return Err(GwlError::UnsupportedDimension(dim));
        }
        let n = positions.len();
        if scalars.len() != n || vectors.len() != n {
            return Err(GwlError::InvalidGraph(format!(
                "attribute lists have lengths {}, {} for {n} nodes",
                scalars.len(),
                vectors.len()
            )));
        }
        if let Some(first) = scalars.first() {
            if scalars.iter().any(|s| s.len() != first.len()) {
                return Err(GwlError::InvalidGraph("scalar tuples have mixed arity".into()));
            }
        }
        let mode = positions
            .iter()
            .chain(vectors.iter().flatten())
            .map(Vector::mode)
            .find(|m| *m == NumericMode::Float)
            .unwrap_or(NumericMode::Exact);
        for v in positions.iter().chain(vectors.iter().flatten()) {
            if v.dim() != dim {
                return Err(GwlError::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            if v.mode() != mode {
                return Err(GwlError::ModeMismatch(mode, v.mode()));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(GwlError::InvalidGraph(format!("edge ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(GwlError::InvalidGraph(format!("self-loop at node {i}")));
            }
            if !adjacency[i].contains(&j) {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(GeometricGraph {
            dim,
            mode,
            scalars,
            vectors,
            positions,
            adjacency,
        })
    }

    /// A graph with uniform (empty) scalars and no vector features.
    pub fn from_positions(dim: usize, positions: Vec<Vector>, edges: &[(usize, usize)]) -> Result<GeometricGraph> {
        let n = positions.len();
        GeometricGraph::new(dim, vec![Vec::new(); n], vec![Vec::new(); n], positions, edges)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn scalars(&self, i: usize) -> &Scalars {
        &self.scalars[i]
    }

    pub fn vectors(&self, i: usize) -> &[Vector] {
        &self.vectors[i]
    }

    pub fn position(&self, i: usize) -> &Vector {
        &self.positions[i]
    }

    pub fn positions(&self) -> &[Vector] {
        &self.positions
    }

    pub fn neighbours(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Relative position `x_i - x_j`.
    pub fn relative(&self, i: usize, j: usize) -> Vector {
        self.positions[i].sub(&self.positions[j])
    }

    pub fn centroid(&self) -> Vector {
        let mut acc = Vector::zeros(self.dim, self.mode);
        for p in &self.positions {
            acc = acc.add(p);
        }
        if self.is_empty() {
            return acc;
        }
        acc.scale(&(Num::one(self.mode) / Num::from_i64(self.len() as i64, self.mode)))
    }

    /// Hop distances from `src`; `None` for unreachable nodes.
    pub fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("visited");
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Graph diameter, or `None` if disconnected. Empty graphs have diameter 0.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.len() {
            for d in self.bfs(s) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    pub fn is_connected(&self) -> bool {
        self.diameter().is_some()
    }

    /// Nodes within `hops` of `centre`, in increasing index order.
    pub fn hop_ball(&self, centre: usize, hops: usize) -> Vec<usize> {
        self.bfs(centre)
            .into_iter()
            .enumerate()
            .filter_map(|(i, d)| d.filter(|&d| d <= hops).map(|_| i))
            .collect()
    }

    /// Induced subgraph on `nodes`, relabelled in the given order.
    pub fn induced(&self, nodes: &[usize]) -> GeometricGraph {
        let index = |v: usize| nodes.iter().position(|&u| u == v);
        let mut edges = Vec::new();
        for (a, &u) in nodes.iter().enumerate() {
            for &w in &self.adjacency[u] {
                if let Some(b) = index(w) {
                    if a < b {
                        edges.push((a, b));
                    }
                }
            }
        }
        GeometricGraph::new(
            self.dim,
            nodes.iter().map(|&u| self.scalars[u].clone()).collect(),
            nodes.iter().map(|&u| self.vectors[u].clone()).collect(),
            nodes.iter().map(|&u| self.positions[u].clone()).collect(),
            &edges,
        )
        .expect("induced subgraph of a valid graph")
    }

    /// The same graph with every coordinate converted to `mode`.
    pub fn in_mode(&self, mode: NumericMode) -> GeometricGraph {
        GeometricGraph {
            dim: self.dim,
            mode,
            scalars: self.scalars.clone(),
            vectors: self
                .vectors
                .iter()
                .map(|vs| vs.iter().map(|v| v.in_mode(mode)).collect())
                .collect(),
            positions: self.positions.iter().map(|p| p.in_mode(mode)).collect(),
            adjacency: self.adjacency.clone(),
        }
    }

    /// Replaces the adjacency with a new edge set.
    pub fn with_edges(&self, edges: &[(usize, usize)]) -> Result<GeometricGraph> {
        GeometricGraph::new(
            self.dim,
            self.scalars.clone(),
            self.vectors.clone(),
            self.positions.clone(),
            edges,
        )
    }

    /// Replaces node scalars.
    pub fn with_scalars(&self, scalars: Vec<Scalars>) -> Result<GeometricGraph> {
        GeometricGraph::new(
            self.dim,
            scalars,
            self.vectors.clone(),
            self.positions.clone(),
            &self.edges(),
        )
    }

    /// Embeds a lower-dimensional graph into `dim` by zero padding.
    pub fn embed(&self, dim: usize) -> Result<GeometricGraph> {
        if dim < self.dim {
            return Err(GwlError::DimensionMismatch {
                expected: self.dim,
                found: dim,
            });
        }
        let pad = |v: &Vector| {
            let mut c = v.0.clone();
            c.resize(dim, Num::zero(self.mode));
            Vector(c)
        };
        GeometricGraph::new(
            dim,
            self.scalars.clone(),
            self.vectors.iter().map(|vs| vs.iter().map(pad).collect()).collect(),
            self.positions.iter().map(pad).collect(),
            &self.edges(),
        )
    }

    pub(crate) fn check_compatible(&self, other: &GeometricGraph) -> Result<()> {
        if self.dim != other.dim {
            return Err(GwlError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.mode != other.mode {
            return Err(GwlError::ModeMismatch(self.mode, other.mode));
        }
        Ok(())
    }
}

/// Rotation-only (`SO`) or rotation-and-reflection (`O`) symmetry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupVariant {
    O,
    SO,
}

/// The Euclidean symmetry group under which graphs are compared. Translation
/// invariance is always on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub variant: GroupVariant,
    pub dim: usize,
}

impl GroupSpec {
    pub fn orthogonal(dim: usize) -> GroupSpec {
        GroupSpec {
            variant: GroupVariant::O,
            dim,
        }
    }

    pub fn special(dim: usize) -> GroupSpec {
        GroupSpec {
            variant: GroupVariant::SO,
            dim,
        }
    }

    pub fn is_rotation_only(&self) -> bool {
        self.variant == GroupVariant::SO
    }

    pub(crate) fn check(&self, graph: &GeometricGraph) -> Result<()> {
        if graph.dim() != self.dim {
            return Err(GwlError::DimensionMismatch {
                expected: self.dim,
                found: graph.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            GroupVariant::O => write!(f, "O({})", self.dim),
            GroupVariant::SO => write!(f, "SO({})", self.dim),
        }
    }
}

/// A permutation, orthogonal matrix and translation.
///
/// `permutation[i]` is the index node `i` is sent to. Positions and vector
/// features are row vectors right-multiplied by `rotation`; positions are
/// then translated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryWitness {
    pub permutation: Vec<usize>,
    pub rotation: Matrix,
    pub translation: Vector,
}

impl IsometryWitness {
    pub fn identity(n: usize, dim: usize, mode: NumericMode) -> IsometryWitness {
        IsometryWitness {
            permutation: (0..n).collect(),
            rotation: Matrix::identity(dim, mode),
            translation: Vector::zeros(dim, mode),
        }
    }

    /// Checks bijectivity, orthogonality and, when `group` is rotation-only,
    /// `det = +1`.
    pub fn validate(&self, n: usize, group: Option<GroupSpec>) -> Result<()> {
        let mut seen = vec![false; n];
        if self.permutation.len() != n {
            return Err(GwlError::InvalidPermutation(n));
        }
        for &p in &self.permutation {
            if p >= n || seen[p] {
                return Err(GwlError::InvalidPermutation(n));
            }
            seen[p] = true;
        }
        let residual = self.rotation.orthogonality_residual();
        if residual > 0.0 {
            return Err(GwlError::NonOrthogonal(residual));
        }
        if let Some(g) = group {
            if g.is_rotation_only() && self.rotation.det().signum() != 1 {
                return Err(GwlError::NotARotation);
            }
        }
        Ok(())
    }
}

/// Applies `w` to `g`: conjugates the adjacency by the permutation, permutes
/// attributes, right-multiplies vectors and positions by the matrix and
/// translates positions.
///
/// An exact graph with a float matrix or translation is coerced to float mode.
pub fn apply_isometry(g: &GeometricGraph, w: &IsometryWitness) -> Result<GeometricGraph> {
    let n = g.len();
    if w.rotation.dim() != g.dim() || w.translation.dim() != g.dim() {
        return Err(GwlError::DimensionMismatch {
            expected: g.dim(),
            found: w.rotation.dim(),
        });
    }
    w.validate(n, None)?;
    let mut mode = g.mode();
    if mode == NumericMode::Exact
        && (w.rotation.mode() == NumericMode::Float || w.translation.mode() == NumericMode::Float)
    {
        warn!("isometry has non-rational entries; coercing graph to float mode");
        mode = NumericMode::Float;
    }
    let q = w.rotation.in_mode(mode);
    let t = w.translation.in_mode(mode);
    let g = g.in_mode(mode);

    let mut scalars = vec![Vec::new(); n];
    let mut vectors = vec![Vec::new(); n];
    let mut positions = vec![Vector::zeros(g.dim(), mode); n];
    for i in 0..n {
        let dst = w.permutation[i];
        scalars[dst] = g.scalars(i).clone();
        vectors[dst] = g.vectors(i).iter().map(|v| q.apply_right(v)).collect();
        positions[dst] = q.apply_right(g.position(i)).add(&t);
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(i, j)| (w.permutation[i], w.permutation[j]))
        .collect();
    GeometricGraph::new(g.dim(), scalars, vectors, positions, &edges)
}

/// Builds the radial-cutoff graph: `i ~ j` iff `0 < |x_i - x_j| <= r`,
/// decided on squared distances. Coincident points get no edge and are
/// reported through the log.
pub fn build_radial_graph(points: Vec<PointRecord>, r: &Num) -> Result<GeometricGraph> {
    if r.signum() <= 0 {
        return Err(GwlError::NonPositiveCutoff);
    }
    let dim = points.first().map(|p| p.position.dim()).unwrap_or(1);
    for p in &points {
        if p.position.dim() != dim {
            return Err(GwlError::DimensionMismatch {
                expected: dim,
                found: p.position.dim(),
            });
        }
    }
    let r2 = r.square();
    let mut edges = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d2 = points[i].position.sub(&points[j].position).norm2();
            if d2.is_zero() {
                warn!("nodes {i} and {j} coincide; no edge between them");
                continue;
            }
            if d2.cmp_tol(&r2) != std::cmp::Ordering::Greater {
                edges.push((i, j));
            }
        }
    }
    let mut scalars = Vec::with_capacity(points.len());
    let mut vectors = Vec::with_capacity(points.len());
    let mut positions = Vec::with_capacity(points.len());
    for p in points {
        scalars.push(p.scalars);
        vectors.push(p.vectors);
        positions.push(p.position);
    }
    let g = GeometricGraph::new(dim, scalars, vectors, positions, &edges)?;
    if g.mode() != r.mode() && g.mode() == NumericMode::Exact {
        warn!("float cutoff used on an exact point set");
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(coords: &[&[i64]]) -> Vec<PointRecord> {
        coords.iter().map(|c| PointRecord::at(Vector::from_ints(c))).collect()
    }

    #[test]
    fn radial_edge_at_distance_one() {
        let g = build_radial_graph(pts(&[&[0, 0], &[1, 0]]), &Num::ratio(3, 2)).unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn radial_no_edge_at_distance_two() {
        let g = build_radial_graph(pts(&[&[0, 0], &[2, 0]]), &Num::ratio(3, 2)).unwrap();
        assert!(g.edges().is_empty());
    }

    #[test]
    fn radial_boundary_is_inclusive() {
        let g = build_radial_graph(pts(&[&[0, 0], &[3, 4]]), &Num::int(5)).unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn radial_errors() {
        assert!(matches!(
            build_radial_graph(pts(&[&[0, 0]]), &Num::int(0)),
            Err(GwlError::NonPositiveCutoff)
        ));
        assert!(matches!(
            build_radial_graph(pts(&[&[0, 0], &[0, 0, 0]]), &Num::int(1)),
            Err(GwlError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn coincident_points_have_no_edge() {
        let g = build_radial_graph(pts(&[&[1, 1], &[1, 1], &[1, 2]]), &Num::int(1)).unwrap();
        assert_eq!(g.edges(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn self_loops_rejected() {
        let p = vec![Vector::from_ints(&[0]), Vector::from_ints(&[1])];
        assert!(GeometricGraph::from_positions(1, p, &[(1, 1)]).is_err());
    }

    #[test]
    fn identity_witness_is_noop() {
        let g = build_radial_graph(pts(&[&[0, 0], &[1, 0], &[1, 1]]), &Num::int(1)).unwrap();
        let w = IsometryWitness::identity(3, 2, NumericMode::Exact);
        assert_eq!(apply_isometry(&g, &w).unwrap(), g);
    }

    #[test]
    fn rotation_by_pi() {
        let g = GeometricGraph::from_positions(2, vec![Vector::from_ints(&[1, 0])], &[]).unwrap();
        let w = IsometryWitness {
            permutation: vec![0],
            rotation: Matrix::from_ints(&[&[-1, 0], &[0, -1]]),
            translation: Vector::from_ints(&[0, 0]),
        };
        let h = apply_isometry(&g, &w).unwrap();
        assert_eq!(h.position(0), &Vector::from_ints(&[-1, 0]));
        assert_eq!(h.mode(), NumericMode::Exact);
    }

    #[test]
    fn float_rotation_coerces_mode() {
        let g = GeometricGraph::from_positions(2, vec![Vector::from_ints(&[1, 0])], &[]).unwrap();
        let w = IsometryWitness {
            permutation: vec![0],
            rotation: Matrix::rotation_2d(0.3),
            translation: Vector::from_ints(&[0, 0]),
        };
        assert_eq!(apply_isometry(&g, &w).unwrap().mode(), NumericMode::Float);
    }

    #[test]
    fn bad_witnesses_rejected() {
        let g = GeometricGraph::from_positions(2, vec![Vector::from_ints(&[1, 0]); 2], &[]).unwrap();
        let mut w = IsometryWitness::identity(2, 2, NumericMode::Exact);
        w.permutation = vec![0, 0];
        assert!(matches!(apply_isometry(&g, &w), Err(GwlError::InvalidPermutation(2))));
        let w = IsometryWitness {
            permutation: vec![0, 1],
            rotation: Matrix::from_ints(&[&[2, 0], &[0, 1]]),
            translation: Vector::from_ints(&[0, 0]),
        };
        assert!(matches!(apply_isometry(&g, &w), Err(GwlError::NonOrthogonal(_))));
    }

    #[test]
    fn diameter_and_balls() {
        let p = (0..4).map(|i| Vector::from_ints(&[i])).collect();
        let g = GeometricGraph::from_positions(1, p, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.diameter(), Some(3));
        assert_eq!(g.hop_ball(1, 1), vec![0, 1, 2]);
        let h = g.with_edges(&[(0, 1)]).unwrap();
        assert_eq!(h.diameter(), None);
    }
}
