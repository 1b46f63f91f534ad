use super::{CoefficientTable, NewformDescriptor};
use crate::arith;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Extends lambda(p), p <= N, to all n <= N by the prime-power recursion
/// and multiplicativity.
pub fn hecke_extend(
    prime_values: &BTreeMap<u64, f64>,
    descriptor: &NewformDescriptor,
    n_max: u64,
) -> Result<CoefficientTable> {
    descriptor.validate()?;
    if n_max == 0 {
        return Err(Error::Domain("N must be >= 1".into()));
    }
    let n = n_max as usize;
    let spf = arith::smallest_prime_factors(n);
    let mut lambda = vec![0.0f64; n];
    lambda[0] = 1.0;
    for m in 2..=n {
        let p = spf[m] as usize;
        let mut pe = p;
        let mut e = 1;
        while (m / pe).is_multiple_of(p) {
            pe *= p;
            e += 1;
        }
        lambda[m - 1] = if pe == m {
            if e == 1 {
                *prime_values.get(&(p as u64)).ok_or(Error::IncompleteData(p as u64))?
            } else {
                let lp = lambda[p - 1];
                let prev = lambda[m / p - 1];
                if descriptor.divides_level(p as u64) {
                    lp * prev
                } else {
                    lp * prev - lambda[m / (p * p) - 1]
                }
            }
        } else {
            lambda[pe - 1] * lambda[m / pe - 1]
        };
    }
    Ok(CoefficientTable::from_lambda(descriptor.clone(), lambda))
}

/// Exact version on unnormalized integers:
/// a(p^{r+1}) = a(p) a(p^r) - p^{k-1} a(p^{r-1}) for p not dividing q, a(p)^{r+1} otherwise.
pub fn hecke_extend_raw(
    prime_values: &BTreeMap<u64, BigInt>,
    descriptor: &NewformDescriptor,
    n_max: u64,
) -> Result<Vec<BigInt>> {
    descriptor.validate()?;
    let n = n_max as usize;
    let spf = arith::smallest_prime_factors(n);
    let mut a = vec![BigInt::zero(); n];
    if n == 0 {
        return Err(Error::Domain("N must be >= 1".into()));
    }
    a[0] = BigInt::one();
    let k1 = descriptor.weight - 1;
    for m in 2..=n {
        let p = spf[m] as usize;
        let mut pe = p;
        let mut e = 1;
        while (m / pe).is_multiple_of(p) {
            pe *= p;
            e += 1;
        }
        a[m - 1] = if pe == m {
            if e == 1 {
                prime_values.get(&(p as u64)).ok_or(Error::IncompleteData(p as u64))?.clone()
            } else if descriptor.divides_level(p as u64) {
                &a[p - 1] * &a[m / p - 1]
            } else {
                &a[p - 1] * &a[m / p - 1] - BigInt::from(p).pow(k1) * &a[m / (p * p) - 1]
            }
        } else {
            &a[pe - 1] * &a[m / pe - 1]
        };
    }
    Ok(a)
}
