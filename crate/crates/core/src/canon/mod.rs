//! Geometric objects, orbit equality and the orbit registry that realises
//! the idealised orbit-injective hash.

mod body;
mod object;
mod orbit;
mod registry;

pub use body::{body_descriptors, BodyDescriptor, Neighbour};
pub use object::{Child, Colour, GeometricObject, VectorTrace};
pub use orbit::{fragile_comparisons, orbit_equal};
pub use registry::OrbitRegistry;
