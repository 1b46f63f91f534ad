use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use std::collections::BTreeMap;

/// Eta quotient prod_d eta(d z)^{e_d}, stored as d -> e_d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaPattern {
    pub exponents: BTreeMap<u64, i32>,
}

impl EtaPattern {
    pub fn new(exponents: BTreeMap<u64, i32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::Domain("empty eta pattern".into()));
        }
        if exponents.keys().any(|&d| d == 0) {
            return Err(Error::Domain("eta pattern keys must be positive".into()));
        }
        Ok(EtaPattern { exponents })
    }

    /// Delta = eta(z)^24.
    pub fn delta() -> Self {
        EtaPattern { exponents: BTreeMap::from([(1, 24)]) }
    }

    /// eta(z)^2 eta(11z)^2.
    pub fn f11() -> Self {
        EtaPattern { exponents: BTreeMap::from([(1, 2), (11, 2)]) }
    }

    pub fn level(&self) -> u64 {
        self.exponents.keys().fold(1, |acc, &d| acc.lcm(&d))
    }

    /// Sum of d e_d / 24: the power of q in front of the product.
    pub fn leading_power(&self) -> Option<i64> {
        let s: i64 = self.exponents.iter().map(|(&d, &e)| d as i64 * e as i64).sum();
        (s % 24 == 0).then_some(s / 24)
    }
}

/// Sparse series with constant term 1: (exponent, coefficient) pairs for exponent >= 1.
type Sparse = Vec<(usize, i64)>;

/// prod (1 - x^n) = sum_k (-1)^k x^{k(3k-1)/2}, k over all integers.
fn euler_series(limit: usize) -> Sparse {
    let mut out = Vec::new();
    for k in 1i64.. {
        let e1 = (k * (3 * k - 1) / 2) as usize;
        if e1 > limit {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out.push((e1, sign));
        let e2 = (k * (3 * k + 1) / 2) as usize;
        if e2 <= limit {
            out.push((e2, sign));
        }
    }
    out
}

/// prod (1 - x^n)^3 = sum_{k>=0} (-1)^k (2k+1) x^{k(k+1)/2}.
fn jacobi_series(limit: usize) -> Sparse {
    let mut out = Vec::new();
    for k in 1i64.. {
        let e = (k * (k + 1) / 2) as usize;
        if e > limit {
            break;
        }
        out.push((e, if k % 2 == 0 { 2 * k + 1 } else { -(2 * k + 1) }));
    }
    out
}

trait Coef: Clone {
    fn from_i64(v: i64) -> Self;
    /// self += c * k; false on overflow.
    fn add_scaled(&mut self, c: &Self, k: i64) -> bool;
    /// self -= c * k; false on overflow.
    fn sub_scaled(&mut self, c: &Self, k: i64) -> bool {
        self.add_scaled(c, -k)
    }
}

impl Coef for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    #[inline]
    fn add_scaled(&mut self, c: &Self, k: i64) -> bool {
        match c.checked_mul(k as i128).and_then(|t| self.checked_add(t)) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
}

impl Coef for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn add_scaled(&mut self, c: &Self, k: i64) -> bool {
        *self += c * k;
        true
    }
}

/// In place: series *= S(x^d). Descending index keeps lower entries unmodified.
fn mul_sparse<C: Coef>(c: &mut [C], s: &Sparse, d: usize) -> bool {
    for n in (0..c.len()).rev() {
        let mut acc = c[n].clone();
        for &(e, k) in s {
            let off = e * d;
            if off > n {
                break;
            }
            if !acc.add_scaled(&c[n - off], k) {
                return false;
            }
        }
        c[n] = acc;
    }
    true
}

/// In place: series /= S(x^d) for S with constant term 1.
fn div_sparse<C: Coef>(c: &mut [C], s: &Sparse, d: usize) -> bool {
    for n in 0..c.len() {
        let mut acc = c[n].clone();
        for &(e, k) in s {
            let off = e * d;
            if off > n {
                break;
            }
            if !acc.sub_scaled(&c[n - off], k) {
                return false;
            }
        }
        c[n] = acc;
    }
    true
}

fn expand<C: Coef>(pattern: &EtaPattern, len: usize) -> Option<Vec<C>> {
    let mut c = vec![C::from_i64(0); len];
    c[0] = C::from_i64(1);
    let limit = len.saturating_sub(1);
    let euler = euler_series(limit);
    let jacobi = jacobi_series(limit);
    for (&d, &e) in &pattern.exponents {
        let d = d as usize;
        let (cubes, singles) = (e.unsigned_abs() / 3, e.unsigned_abs() % 3);
        for _ in 0..cubes {
            let ok = if e > 0 { mul_sparse(&mut c, &jacobi, d) } else { div_sparse(&mut c, &jacobi, d) };
            if !ok {
                return None;
            }
        }
        for _ in 0..singles {
            let ok = if e > 0 { mul_sparse(&mut c, &euler, d) } else { div_sparse(&mut c, &euler, d) };
            if !ok {
                return None;
            }
        }
    }
    Some(c)
}

/// Coefficients a(1..=N) of q * prod_d prod_n (1 - q^{dn})^{e_d}, i.e. a(n) is the
/// coefficient of q^{n-1} in the product. Exact; 128-bit fast path with
/// arbitrary-precision fallback on overflow.
pub fn eta_product_expansion(pattern: &EtaPattern, n: u64) -> Result<Vec<BigInt>> {
    if n == 0 {
        return Err(Error::Domain("N must be >= 1".into()));
    }
    if pattern.exponents.is_empty() {
        return Err(Error::Domain("empty eta pattern".into()));
    }
    let len = n as usize;
    if let Some(c) = expand::<i128>(pattern, len) {
        return Ok(c.into_iter().map(BigInt::from).collect());
    }
    Ok(expand::<BigInt>(pattern, len).expect("bigint expansion cannot overflow"))
}
