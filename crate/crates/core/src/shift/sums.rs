use crate::arith;
use crate::coeff::CoefficientTable;
use crate::error::{Error, Result};

/// Result of a shifted sum; `empty` flags |l| > x (no admissible pairs).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftedSum {
    pub value: f64,
    pub terms: u64,
    pub empty: bool,
}

/// Index range of n with n >= 1, m = n + l >= 1, max(m, n) <= floor(x).
pub fn shift_range(l: i64, x: f64) -> (u64, u64) {
    let xf = x.floor() as i64;
    let lo = 1.max(1 - l);
    let hi = xf.min(xf - l);
    if hi < lo {
        (1, 0)
    } else {
        (lo as u64, hi as u64)
    }
}

/// sum |lambda(m) lambda(n)| over n >= 1, m = n + l >= 1, max(m, n) <= x, ascending n.
pub fn shifted_sum_exact(table: &CoefficientTable, l: i64, x: f64) -> Result<ShiftedSum> {
    if l == 0 {
        return Err(Error::Domain("shift l must be nonzero".into()));
    }
    if x < 1.0 {
        return Err(Error::Domain(format!("x must be >= 1, got {x}")));
    }
    let (lo, hi) = shift_range(l, x);
    if hi < lo {
        return Ok(ShiftedSum { value: 0.0, terms: 0, empty: true });
    }
    table.require((hi as i64 + l.max(0)) as u64)?;
    let mut value = 0.0;
    for n in lo..=hi {
        let m = (n as i64 + l) as u64;
        value += (table.lambda(m) * table.lambda(n)).abs();
    }
    Ok(ShiftedSum { value, terms: hi - lo + 1, empty: false })
}

/// x prod_{p <= x} (1 + 2|lambda(p)|/p) / log(e x)^{2 - eps}.
pub fn shifted_sum_bound(table: &CoefficientTable, x: f64, eps: f64) -> Result<f64> {
    if x < 1.0 || !(0.0..1.0).contains(&eps) || eps == 0.0 {
        return Err(Error::Domain(format!("need x >= 1 and eps in (0,1), got x = {x}, eps = {eps}")));
    }
    let primes = arith::primes_up_to(x.floor() as u64);
    if let Some(&p) = primes.last() {
        table.require(p)?;
    }
    let prod: f64 = primes.iter().map(|&p| 1.0 + 2.0 * table.lambda(p).abs() / p as f64).product();
    Ok(x * prod / (1.0 + x.ln()).powf(2.0 - eps))
}

/// (a, b, c) with c = gcd(z_m, z_n), a = z_m / c, b = z_n / c.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SieveTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl SieveTriple {
    /// p | abc implies p <= z; gcd(a, b) = 1; c | l.
    pub fn satisfies_constraints(&self, l: i64, z: f64) -> bool {
        let smooth = arith::factorize(self.a * self.b * self.c).iter().all(|&(p, _)| p as f64 <= z);
        smooth && arith::gcd(self.a, self.b) == 1 && l.unsigned_abs().is_multiple_of(self.c)
    }
}

/// Largest divisor of n composed of primes <= z, using a precomputed prime list.
pub fn z_part_with(n: u64, primes: &[u64]) -> u64 {
    let mut part = 1;
    let mut rest = n;
    for &p in primes {
        if p * p > rest {
            // Remaining cofactor is 1 or a prime; include it if it is in range.
            if rest > 1 && primes.last().is_some_and(|&pmax| rest <= pmax) {
                part *= rest;
            }
            return part;
        }
        while rest.is_multiple_of(p) {
            rest /= p;
            part *= p;
        }
    }
    part
}

pub fn z_part(n: u64, z: f64) -> u64 {
    z_part_with(n, &arith::primes_up_to(z.floor() as u64))
}

fn triple_with(n: u64, l: i64, primes: &[u64]) -> SieveTriple {
    let m = (n as i64 + l) as u64;
    let (zm, zn) = (z_part_with(m, primes), z_part_with(n, primes));
    let c = arith::gcd(zm, zn);
    SieveTriple { a: zm / c, b: zn / c, c }
}

pub fn z_part_triple(n: u64, l: i64, z: f64) -> Result<SieveTriple> {
    if n < 1 || n as i64 + l < 1 || z < 2.0 {
        return Err(Error::Domain(format!("need n >= 1, n + l >= 1, z >= 2 (n = {n}, l = {l}, z = {z})")));
    }
    Ok(triple_with(n, l, &arith::primes_up_to(z.floor() as u64)))
}

/// Exact fiber size and the large-sieve expression
/// (x + (yz)^2)/log(z)^2 * |l| / (c^2 phi(ab|l|/c)), y = max(ac, bc).
pub fn sieve_class_count(triple: SieveTriple, l: i64, z: f64, x: f64) -> Result<(u64, f64)> {
    let SieveTriple { a, b, c } = triple;
    if l == 0 || z < 2.0 || x < 1.0 {
        return Err(Error::Domain("need l != 0, z >= 2, x >= 1".into()));
    }
    let labs = l.unsigned_abs();
    if !labs.is_multiple_of(c) {
        return Err(Error::Domain(format!("c = {c} does not divide l = {l}")));
    }
    let primes = arith::primes_up_to(z.floor() as u64);
    let mut count = 0;
    for n in 1..=(x.floor() as u64) {
        if n as i64 + l >= 1 && triple_with(n, l, &primes) == triple {
            count += 1;
        }
    }
    let y = (a * c).max(b * c) as f64;
    let phi = arith::euler_phi(a * b * (labs / c)) as f64;
    let rhs = (x + (y * z).powi(2)) / z.ln().powi(2) * labs as f64 / ((c * c) as f64 * phi);
    Ok((count, rhs))
}

/// All fibers of n -> z_part_triple(n, l, z) over admissible n <= x, in triple order.
pub fn sieve_fibers(l: i64, z: f64, x: f64) -> std::collections::BTreeMap<SieveTriple, u64> {
    let primes = arith::primes_up_to(z.floor() as u64);
    let mut out = std::collections::BTreeMap::new();
    for n in 1..=(x.floor() as u64) {
        if n as i64 + l >= 1 {
            *out.entry(triple_with(n, l, &primes)).or_insert(0) += 1;
        }
    }
    out
}
