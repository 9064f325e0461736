//! Batches of independent refinement runs.
//!
//! A single run is sequential because its registry is single-writer, but
//! separate pairs share nothing, so batches are spread over a rayon pool when
//! the `parallel` feature is on. Output order always matches input order.

use crate::engines::{run_test, RefinementTrace, TestKind, Verdict};
use crate::error::Result;
use crate::graph::{GeometricGraph, GroupSpec};

/// Maps `f` over `items` on the current thread.
pub fn map_sequential<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Maps `f` over `items` on the rayon pool.
#[cfg(feature = "parallel")]
pub fn map_parallel<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Parallel when the `parallel` feature is enabled, sequential otherwise.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    map_parallel(items, f)
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    map_sequential(items, f)
}

pub type RunOutcome = Result<(Verdict, RefinementTrace)>;

/// Runs one test over many pairs.
pub fn run_pairs(
    pairs: &[(GeometricGraph, GeometricGraph)],
    kind: TestKind,
    group: GroupSpec,
    max_iters: Option<usize>,
) -> Vec<RunOutcome> {
    map(pairs, |(a, b)| run_test(kind, a, b, group, max_iters))
}

/// As [`run_pairs`], always on the current thread.
pub fn run_pairs_sequential(
    pairs: &[(GeometricGraph, GeometricGraph)],
    kind: TestKind,
    group: GroupSpec,
    max_iters: Option<usize>,
) -> Vec<RunOutcome> {
    map_sequential(pairs, |(a, b)| run_test(kind, a, b, group, max_iters))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_kchain;

    #[test]
    fn batch_matches_sequential() {
        let pairs: Vec<_> = (2..6)
            .map(|k| {
                let (a, b, _) = gen_kchain(k).unwrap();
                (a, b)
            })
            .collect();
        let group = GroupSpec::orthogonal(3);
        let par: Vec<_> = run_pairs(&pairs, TestKind::Gwl, group, None)
            .into_iter()
            .map(|r| r.unwrap())
            .collect();
        let seq: Vec<_> = run_pairs_sequential(&pairs, TestKind::Gwl, group, None)
            .into_iter()
            .map(|r| r.unwrap())
            .collect();
        assert_eq!(par, seq);
    }
}
