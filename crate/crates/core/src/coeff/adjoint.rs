use super::{satake_from_lambda, CoefficientTable, SatakeLocalData};
use crate::arith;
use crate::error::Result;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Truncated Euler product for L(ad f, 1).
///
/// `tail_bound` bounds |value(P') - value(P)| for every P < P' <= P^2
/// (the `horizon`), assuming |alpha| = |beta| = 1 at unramified primes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdjointL {
    pub value: f64,
    pub tail_bound: f64,
    pub cutoff: u64,
    pub horizon: f64,
}

fn unramified_factor(s: &SatakeLocalData<Complex64>) -> f64 {
    let pi = 1.0 / s.p as f64;
    let d = (1.0 - s.alpha * s.alpha * pi) * (1.0 - s.beta * s.beta * pi) * (1.0 - pi);
    1.0 / d.re
}

fn ramified_factor(p: u64) -> f64 {
    let pf = p as f64;
    1.0 / (1.0 - 1.0 / (pf * pf))
}

/// log|L_p| <= 3/p + 3/(2p(p-1)) for tempered p; summed over P < p <= P^2.
fn tail_bound(value: f64, cutoff: u64) -> f64 {
    if cutoff < 2 {
        return f64::INFINITY;
    }
    let p = cutoff as f64;
    let s1 = arith::prime_reciprocal_sum_upper(p, p * p);
    value * ((3.0 * s1 + 1.5 / p).exp() - 1.0)
}

/// Euler product over p <= cutoff from the table's lambda(p).
pub fn adjoint_l_at_1(table: &CoefficientTable, cutoff: u64) -> Result<AdjointL> {
    if cutoff >= 2 {
        table.require(cutoff)?;
    }
    let mut value = 1.0;
    for p in arith::primes_up_to(cutoff) {
        value *= if table.descriptor.divides_level(p) {
            ramified_factor(p)
        } else {
            unramified_factor(&satake_from_lambda(table.lambda(p), p)?)
        };
    }
    Ok(AdjointL { value, tail_bound: tail_bound(value, cutoff), cutoff, horizon: (cutoff as f64).powi(2) })
}

/// Euler product from explicit Satake data; primes dividing `level` use zeta_p(2).
pub fn adjoint_l_from_satake(
    level: u64,
    satake: &BTreeMap<u64, SatakeLocalData<Complex64>>,
    cutoff: u64,
) -> Result<AdjointL> {
    let mut value = 1.0;
    for p in arith::primes_up_to(cutoff) {
        value *= if level.is_multiple_of(p) {
            ramified_factor(p)
        } else {
            let s = satake.get(&p).ok_or(crate::error::Error::IncompleteData(p))?;
            unramified_factor(s)
        };
    }
    Ok(AdjointL { value, tail_bound: tail_bound(value, cutoff), cutoff, horizon: (cutoff as f64).powi(2) })
}
