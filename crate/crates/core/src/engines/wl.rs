use super::drive;
use super::{check_cap, default_stable_cap, RefinementTrace, Verdict};
use crate::canon::{Colour, OrbitRegistry};
use crate::error::Result;
use crate::graph::{GeometricGraph, GroupSpec};

/// Plain colour refinement on scalars and adjacency; geometry is ignored.
/// Stops when histograms differ or the joint partition is stable.
pub fn run_wl(
    g1: &GeometricGraph,
    g2: &GeometricGraph,
    max_iters: Option<usize>,
) -> Result<(Verdict, RefinementTrace)> {
    let cap = check_cap(max_iters, default_stable_cap(g1, g2))?;
    let mut reg = OrbitRegistry::new(GroupSpec::orthogonal(g1.dim()));
    let graphs = [g1, g2];
    let initial: Vec<Colour> = graphs
        .iter()
        .flat_map(|g| (0..g.len()).map(|i| g.scalars(i).clone()).collect::<Vec<_>>())
        .map(|s| reg.intern_scalars(&s))
        .collect();
    drive(g1.len(), initial, cap, true, |t, prev| {
        let mut out = Vec::with_capacity(prev.len());
        let mut offset = 0;
        for g in graphs {
            for i in 0..g.len() {
                let mut key = vec![t as u32, prev[offset + i].0];
                let mut nb: Vec<u32> = g.neighbours(i).iter().map(|&j| prev[offset + j].0).collect();
                nb.sort_unstable();
                key.extend(nb);
                out.push(reg.intern_key(key));
            }
            offset += g.len();
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;

    fn path(n: usize) -> GeometricGraph {
        let p = (0..n).map(|i| Vector::from_ints(&[i as i64])).collect();
        let e: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        GeometricGraph::from_positions(1, p, &e).unwrap()
    }

    #[test]
    fn size_mismatch_at_zero() {
        let star = GeometricGraph::from_positions(
            1,
            (0..4).map(|i| Vector::from_ints(&[i])).collect(),
            &[(0, 1), (0, 2), (0, 3)],
        )
        .unwrap();
        let (v, _) = run_wl(&path(3), &star, None).unwrap();
        assert_eq!(v, Verdict::Distinguished { iteration: 0 });
    }

    #[test]
    fn path_vs_triangle_at_one() {
        let tri = path(3).with_edges(&[(0, 1), (1, 2), (0, 2)]).unwrap();
        let (v, trace) = run_wl(&path(3), &tri, None).unwrap();
        assert_eq!(v, Verdict::Distinguished { iteration: 1 });
        assert_eq!(trace.iterations.len(), 2);
    }

    #[test]
    fn permuted_copy_indistinguishable() {
        let g = path(5);
        let h = g.with_edges(&[(4, 2), (2, 0), (0, 3), (3, 1)]).unwrap();
        let (v, trace) = run_wl(&g, &h, None).unwrap();
        assert!(matches!(v, Verdict::Indistinguishable { stable: true, .. }));
        assert_eq!(trace.termination, super::super::Termination::PartitionStable);
    }
}
