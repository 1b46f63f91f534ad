pub mod bessel;
pub mod gamma;
pub mod zeta;

pub use bessel::{bessel_k, bessel_k_bound, bessel_k_real, bessel_k_scaled, kappa_bessel, kappa_holomorphic};
pub use gamma::{gamma, gamma_real, ln_gamma, ln_gamma_real, upper_incomplete_gamma_int};
pub use zeta::{scattering, xi, zeta};
