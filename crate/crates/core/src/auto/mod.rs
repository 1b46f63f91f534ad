//! Automorphic objects on the upper half-plane and the quadrature identities they satisfy.

mod cosets;
mod forms;
mod periods;
mod point;

pub use cosets::*;
pub use forms::*;
pub use periods::*;
pub use point::*;
