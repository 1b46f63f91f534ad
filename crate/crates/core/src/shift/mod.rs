//! Shifted convolution sums, sieve bookkeeping and the weighted sums S_s(l, x).

mod calibration;
mod divisor;
mod psi;
mod quality;
mod sums;
mod testfn;
mod weighted;

pub use calibration::*;
pub use divisor::{divisor_lemma_ratio, DivisorRatio};
pub use psi::{psi_closed_form, psi_function, psi_prime_power, psi_prime_power_as_printed};
pub use quality::{mf_quality, Quality};
pub use sums::*;
pub use testfn::BumpFunction;
pub use weighted::*;
