use super::gamma::ln_gamma;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// B_2, B_4, ..., B_20.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Riemann zeta by Euler-Maclaurin with ten Bernoulli correction terms.
///
/// Valid for Re s > -1, s != 1.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if (s - 1.0).norm() == 0.0 {
        return Err(Error::Pole("zeta at s = 1".into()));
    }
    if s.re <= -1.0 {
        return Err(Error::Domain(format!("zeta implemented for Re s > -1, got {s}")));
    }
    let n = 30 + (2.0 * s.im.abs()).ceil() as u64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_pow = (-s * ln_n).exp();
    sum += n_pow * nf / (s - 1.0) + 0.5 * n_pow;
    // rising factorial s (s+1) ... (s+2j-2) / (2j)! times N^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n_pow / nf;
    for (j, &b) in BERNOULLI.iter().enumerate() {
        if j > 0 {
            let m = 2 * j as u64;
            rising *= (s + (m - 1) as f64) * (s + m as f64);
            fact *= ((m + 1) * (m + 2)) as f64;
            npow /= nf * nf;
        }
        sum += b / fact * rising * npow;
    }
    Ok(sum)
}

/// Completed zeta xi(s) = pi^{-s/2} Gamma(s/2) zeta(s).
pub fn xi(s: Complex64) -> Result<Complex64> {
    let g = (ln_gamma(s / 2.0) - s / 2.0 * PI.ln()).exp();
    Ok(g * zeta(s)?)
}

/// Scattering coefficient M(s) = xi(2s-1) / xi(2s), with the Gamma ratio
/// taken in log form.
pub fn scattering(s: Complex64) -> Result<Complex64> {
    let lg = ln_gamma(s - 0.5) - ln_gamma(s) + 0.5 * PI.ln();
    Ok(lg.exp() * zeta(2.0 * s - 1.0)? / zeta(2.0 * s)?)
}
