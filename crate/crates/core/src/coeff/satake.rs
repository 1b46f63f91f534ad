use crate::error::{Error, Result};
use num_complex::Complex64;

/// Local Satake pair with alpha * beta = 1 and |alpha|, |beta| < sqrt(p).
#[derive(Clone, Debug, PartialEq)]
pub struct SatakeLocalData<S> {
    pub p: u64,
    pub alpha: S,
    pub beta: S,
}

impl SatakeLocalData<Complex64> {
    pub fn new(p: u64, alpha: Complex64, beta: Complex64) -> Result<Self> {
        if (alpha * beta - 1.0).norm() > 1e-12 {
            return Err(Error::Domain(format!("alpha*beta = {} != 1", alpha * beta)));
        }
        let r = (p as f64).sqrt();
        if alpha.norm() >= r || beta.norm() >= r {
            return Err(Error::Domain(format!("|alpha|, |beta| must be < sqrt({p})")));
        }
        Ok(SatakeLocalData { p, alpha, beta })
    }

    /// Pair on the unit circle: alpha = e^{i theta}, beta = e^{-i theta}.
    pub fn unit_circle(p: u64, theta: f64) -> Self {
        let a = Complex64::from_polar(1.0, theta);
        SatakeLocalData { p, alpha: a, beta: a.conj() }
    }
}

/// Roots of x^2 - lambda_p x + 1.
pub fn satake_from_lambda(lambda_p: f64, p: u64) -> Result<SatakeLocalData<Complex64>> {
    if p < 2 {
        return Err(Error::Domain(format!("p = {p} is not prime")));
    }
    let sp = (p as f64).sqrt();
    if lambda_p.abs() >= sp + 1.0 / sp {
        return Err(Error::Domain(format!("|lambda_p| = {} >= p^(1/2) + p^(-1/2)", lambda_p.abs())));
    }
    let disc = lambda_p * lambda_p - 4.0;
    if disc == 0.0 {
        return Err(Error::DegenerateSatake { p, root: lambda_p / 2.0 });
    }
    let (alpha, beta) = if disc < 0.0 {
        let im = 0.5 * (-disc).sqrt();
        (Complex64::new(0.5 * lambda_p, im), Complex64::new(0.5 * lambda_p, -im))
    } else {
        // Larger root first; beta = 1/alpha avoids cancellation.
        let a = 0.5 * (lambda_p + lambda_p.signum() * disc.sqrt());
        (Complex64::new(a, 0.0), Complex64::new(1.0 / a, 0.0))
    };
    Ok(SatakeLocalData { p, alpha, beta })
}
