//! Extended affine Weyl group of PGL(2, Q_p) and local triple-product integrals.

mod element;
mod local;
mod scalar;

pub use element::{enumerate_weyl, weyl_generating_function, BivariateSeries, Family, WeylElement};
pub use local::{
    ip_brute_force, ip_closed_form, local_factors, macdonald_coefficient, tilde_ip, unit_circle_ip,
    watson_finite_part, watson_local_factor, IpSource, LocalFactors, SplitCase, WatsonFinitePart, DEGENERACY_TOL,
};
pub use scalar::{quad_abs_below_sqrt_p, LocalScalar, QuadExt};
