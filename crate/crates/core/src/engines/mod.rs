//! The refinement tests, each run jointly on a graph pair with one shared
//! registry so that colour ids are comparable across the two graphs.

mod gwl;
mod igwl;
mod trace;
mod wl;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use gwl::run_gwl;
pub use igwl::{run_igwl, run_igwl_k};
pub use trace::{Colouring, Histogram, IterationRecord, RefinementTrace, Termination, Verdict};
pub use wl::run_wl;
pub(crate) use trace::drive;

use crate::error::{GwlError, Result};
use crate::graph::{GeometricGraph, GroupSpec};

/// Which test to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    Wl,
    Gwl,
    Igwl,
    IgwlK(usize),
    So2,
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestKind::Wl => f.write_str("wl"),
            TestKind::Gwl => f.write_str("gwl"),
            TestKind::Igwl => f.write_str("igwl"),
            TestKind::IgwlK(k) => write!(f, "igwl-{k}"),
            TestKind::So2 => f.write_str("so2"),
        }
    }
}

impl FromStr for TestKind {
    type Err = GwlError;

    /// Accepts `wl`, `gwl`, `igwl`, `so2` and `igwl-<k>`.
    fn from_str(s: &str) -> Result<TestKind> {
        match s {
            "wl" => Ok(TestKind::Wl),
            "gwl" => Ok(TestKind::Gwl),
            "igwl" => Ok(TestKind::Igwl),
            "so2" => Ok(TestKind::So2),
            _ => s
                .strip_prefix("igwl-")
                .and_then(|k| k.parse().ok())
                .map(TestKind::IgwlK)
                .ok_or_else(|| GwlError::InvalidParameter(format!("unknown test {s:?}"))),
        }
    }
}

/// Dispatches to the requested engine.
pub fn run_test(
    kind: TestKind,
    g1: &GeometricGraph,
    g2: &GeometricGraph,
    group: GroupSpec,
    max_iters: Option<usize>,
) -> Result<(Verdict, RefinementTrace)> {
    match kind {
        TestKind::Wl => run_wl(g1, g2, max_iters),
        TestKind::Gwl => run_gwl(g1, g2, group, max_iters),
        TestKind::Igwl => run_igwl(g1, g2, group, max_iters),
        TestKind::IgwlK(k) => run_igwl_k(g1, g2, group, k, max_iters),
        TestKind::So2 => crate::so2::run_so2_gwl(g1, g2, max_iters),
    }
}

/// Iteration cap for geometry-propagating tests: the larger graph diameter
/// plus one, or `n1 + n2` when either graph is disconnected.
pub fn default_geometric_cap(g1: &GeometricGraph, g2: &GeometricGraph) -> usize {
    match (g1.diameter(), g2.diameter()) {
        (Some(a), Some(b)) => a.max(b) + 1,
        _ => (g1.len() + g2.len()).max(1),
    }
}

/// Iteration cap for tests that stop on a stable partition.
pub fn default_stable_cap(g1: &GeometricGraph, g2: &GeometricGraph) -> usize {
    (g1.len() + g2.len()).max(1)
}

pub(crate) fn check_cap(max_iters: Option<usize>, default: usize) -> Result<usize> {
    match max_iters {
        Some(0) => Err(GwlError::InvalidParameter("max_iters must be at least 1".into())),
        Some(m) => Ok(m),
        None => Ok(default),
    }
}

pub(crate) fn check_pair(g1: &GeometricGraph, g2: &GeometricGraph, group: GroupSpec) -> Result<()> {
    g1.check_compatible(g2)?;
    group.check(g1)
}
