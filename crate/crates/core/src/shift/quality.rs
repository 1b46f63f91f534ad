use crate::arith;
use crate::coeff::{AdjointL, CoefficientTable};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quality {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

/// M_f(x) = prod_{p <= x}(1 + 2|lambda(p)|/p) / (log(ex)^2 L(ad f, 1)).
///
/// The tail bound of L is read as a multiplicative radius, so the interval
/// is [value e^{-t}, value e^{t}] with t = log(1 + tail/L).
pub fn mf_quality(table: &CoefficientTable, adjoint: &AdjointL, x: f64) -> Result<Quality> {
    if x < 1.0 {
        return Err(Error::Domain(format!("x must be >= 1, got {x}")));
    }
    if !(adjoint.value > 0.0) {
        return Err(Error::Domain(format!("L(ad f, 1) must be positive, got {}", adjoint.value)));
    }
    let primes = arith::primes_up_to(x.floor() as u64);
    if let Some(&p) = primes.last() {
        table.require(p)?;
    }
    let num: f64 = primes.iter().map(|&p| 1.0 + 2.0 * table.lambda(p).abs() / p as f64).product();
    let value = num / ((std::f64::consts::E * x).ln().powi(2) * adjoint.value);
    let t = (adjoint.tail_bound / adjoint.value).ln_1p();
    Ok(Quality { value, lower: value * (-t).exp(), upper: value * t.exp() })
}
