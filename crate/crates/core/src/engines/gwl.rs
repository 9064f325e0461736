use std::sync::Arc;

use super::drive;
use super::{check_cap, check_pair, default_geometric_cap, RefinementTrace, Verdict};
use crate::canon::{Child, Colour, GeometricObject, OrbitRegistry};
use crate::error::Result;
use crate::graph::{GeometricGraph, GroupSpec};

/// Geometric WL.
///
/// Iteration 0 colours nodes by their scalar tuple and gives each node the
/// leaf object `(colour, vector features)`. Every later iteration wraps the
/// previous object of a node and of each neighbour, together with the
/// relative positions `x_i - x_j`, into a deeper object and colours it by
/// orbit. A stable partition does not end the run, since deeper objects can
/// still split classes; the run ends on differing histograms or at the cap
/// (default: larger diameter + 1).
pub fn run_gwl(
    g1: &GeometricGraph,
    g2: &GeometricGraph,
    group: GroupSpec,
    max_iters: Option<usize>,
) -> Result<(Verdict, RefinementTrace)> {
    check_pair(g1, g2, group)?;
    let cap = check_cap(max_iters, default_geometric_cap(g1, g2))?;
    let mut reg = OrbitRegistry::new(group);
    let graphs = [g1, g2];
    let mut initial = Vec::with_capacity(g1.len() + g2.len());
    let mut objects: Vec<Arc<GeometricObject>> = Vec::with_capacity(initial.capacity());
    for g in graphs {
        for i in 0..g.len() {
            let c = reg.intern_scalars(g.scalars(i));
            initial.push(c);
            objects.push(GeometricObject::leaf(c, g.vectors(i).to_vec()));
        }
    }
    drive(g1.len(), initial, cap, false, |_, prev: &[Colour]| {
        let mut next_objects = Vec::with_capacity(objects.len());
        let mut offset = 0;
        for g in graphs {
            for i in 0..g.len() {
                let children = g
                    .neighbours(i)
                    .iter()
                    .map(|&j| Child {
                        colour: prev[offset + j],
                        object: objects[offset + j].clone(),
                        rel: g.relative(i, j),
                    })
                    .collect();
                next_objects.push(GeometricObject::node(
                    prev[offset + i],
                    objects[offset + i].clone(),
                    children,
                )?);
            }
            offset += g.len();
        }
        let colours = next_objects
            .iter()
            .map(|o| reg.i_hash(o))
            .collect::<Result<Vec<_>>>()?;
        objects = next_objects;
        Ok(colours)
    })
}
