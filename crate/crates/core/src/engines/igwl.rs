use super::drive;
use super::{check_cap, check_pair, default_stable_cap, RefinementTrace, Verdict};
use crate::canon::{Child, Colour, GeometricObject, Neighbour, OrbitRegistry};
use crate::error::{GwlError, Result};
use crate::graph::{GeometricGraph, GroupSpec};
use crate::linalg::Vector;

/// Invariant GWL: each iteration colours the depth-1 object made of the
/// current colours and the fixed first-hop geometry. Geometry never deepens,
/// so the usual stable-partition stopping rule applies.
pub fn run_igwl(
    g1: &GeometricGraph,
    g2: &GeometricGraph,
    group: GroupSpec,
    max_iters: Option<usize>,
) -> Result<(Verdict, RefinementTrace)> {
    check_pair(g1, g2, group)?;
    let cap = check_cap(max_iters, default_stable_cap(g1, g2))?;
    let mut reg = OrbitRegistry::new(group);
    let graphs = [g1, g2];
    let initial = initial_colours(&mut reg, &graphs);
    let rels = relative_vectors(&graphs);
    drive(g1.len(), initial, cap, true, |_, prev: &[Colour]| {
        let leaves: Vec<_> = graphs
            .iter()
            .flat_map(|g| (0..g.len()).map(move |i| g.vectors(i).to_vec()))
            .zip(prev)
            .map(|(v, &c)| GeometricObject::leaf(c, v))
            .collect();
        let mut out = Vec::with_capacity(prev.len());
        let mut offset = 0;
        for (gi, g) in graphs.iter().enumerate() {
            for i in 0..g.len() {
                let children = g
                    .neighbours(i)
                    .iter()
                    .zip(&rels[gi][i])
                    .map(|(&j, rel)| Child {
                        colour: prev[offset + j],
                        object: leaves[offset + j].clone(),
                        rel: rel.clone(),
                    })
                    .collect();
                let o = GeometricObject::node(prev[offset + i], leaves[offset + i].clone(), children)?;
                out.push(reg.i_hash(&o)?);
            }
            offset += g.len();
        }
        Ok(out)
    })
}

/// IGWL restricted to k-body invariants: each node is coloured by the
/// multiset of descriptors of all ordered `(k-1)`-tuples of its neighbours.
pub fn run_igwl_k(
    g1: &GeometricGraph,
    g2: &GeometricGraph,
    group: GroupSpec,
    k: usize,
    max_iters: Option<usize>,
) -> Result<(Verdict, RefinementTrace)> {
    if k < 2 {
        return Err(GwlError::InvalidBodyOrder(k));
    }
    check_pair(g1, g2, group)?;
    let cap = check_cap(max_iters, default_stable_cap(g1, g2))?;
    let mut reg = OrbitRegistry::new(group);
    let graphs = [g1, g2];
    let initial = initial_colours(&mut reg, &graphs);
    let rels = relative_vectors(&graphs);
    drive(g1.len(), initial, cap, true, |_, prev: &[Colour]| {
        let mut out = Vec::with_capacity(prev.len());
        let mut offset = 0;
        for (gi, g) in graphs.iter().enumerate() {
            for i in 0..g.len() {
                let nbrs: Vec<Neighbour> = g
                    .neighbours(i)
                    .iter()
                    .zip(&rels[gi][i])
                    .map(|(&j, rel)| Neighbour {
                        colour: prev[offset + j],
                        vectors: g.vectors(j),
                        rel,
                    })
                    .collect();
                out.push(reg.i_hash_k(prev[offset + i], g.vectors(i), &nbrs, k)?);
            }
            offset += g.len();
        }
        Ok(out)
    })
}

fn initial_colours(reg: &mut OrbitRegistry, graphs: &[&GeometricGraph]) -> Vec<Colour> {
    graphs
        .iter()
        .flat_map(|g| (0..g.len()).map(move |i| g.scalars(i)))
        .map(|s| reg.intern_scalars(s))
        .collect()
}

/// Per graph, per node, the relative positions to its neighbours in
/// adjacency order.
fn relative_vectors(graphs: &[&GeometricGraph]) -> Vec<Vec<Vec<Vector>>> {
    graphs
        .iter()
        .map(|g| {
            (0..g.len())
                .map(|i| g.neighbours(i).iter().map(|&j| g.relative(i, j)).collect())
                .collect()
        })
        .collect()
}
