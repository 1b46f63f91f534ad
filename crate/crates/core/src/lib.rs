//! Numerical and exact verification of triple-product local integrals,
//! shifted convolution sums and automorphic quadrature identities.

pub mod arith;
pub mod auto;
pub mod coeff;
pub mod error;
pub mod ext;
pub mod quad;
pub mod shift;
pub mod special;
pub mod weyl;

pub use error::{Error, Result};
