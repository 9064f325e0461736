//! Geometric Weisfeiler-Leman tests.
//!
//! This crate decides whether two geometric graphs (attributed graphs whose
//! nodes carry positions and optional vector features) can be told apart up to
//! permutation, rotation, reflection and translation by the WL family of
//! colour refinement tests:
//!
//! * [`engines::run_wl`] ignores geometry entirely;
//! * [`engines::run_gwl`] propagates whole geometric neighbourhoods and colours
//!   them by orbit under `O(d)` or `SO(d)`;
//! * [`engines::run_igwl`] and [`engines::run_igwl_k`] only use invariant
//!   scalars of the first hop (all of them, or those involving at most `k`
//!   bodies);
//! * [`so2::run_so2_gwl`] is a fixed-size 2D variant that carries orientation
//!   in a two-component message.
//!
//! Orbit colours are issued by an [`canon::OrbitRegistry`] which tests orbit
//! equality exactly (rational arithmetic) or within a float tolerance. A
//! brute-force [`oracle`] decides true geometric isomorphism for small graphs
//! and is used to validate every engine.

pub mod batch;
pub mod canon;
pub mod engines;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod numeric;
pub mod oracle;
pub mod properties;
pub mod random;
pub mod report;
pub mod so2;

pub use error::{GwlError, Result};
pub use graph::{
    apply_isometry, build_radial_graph, GeometricGraph, GroupSpec, GroupVariant, IsometryWitness,
    PointRecord,
};
pub use linalg::{Matrix, Vector};
pub use numeric::{Num, NumericMode};
pub use oracle::{geometric_isomorphism_oracle, DEFAULT_ORACLE_CAP};
