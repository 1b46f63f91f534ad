use super::testfn::BumpFunction;
use crate::arith;
use crate::coeff::CoefficientTable;
use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::special::{kappa_bessel, kappa_holomorphic, ln_gamma_real};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Relative size at which the certified tail of S_s stops the summation.
pub const SUM_REL_TOL: f64 = 1e-10;
/// Default multiplier T in the hard cap n <= T x k.
pub const DEFAULT_T: f64 = 32.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedQuery {
    pub s: Complex64,
    pub l: i64,
    pub x: f64,
    pub k: u32,
}

impl WeightedQuery {
    pub fn new(s: Complex64, l: i64, x: f64, k: u32) -> Result<Self> {
        let q = WeightedQuery { s, l, x, k };
        q.validate()?;
        Ok(q)
    }

    /// s purely imaginary or real in (-1/2, 1/2); l != 0; x >= 1; k >= 2.
    pub fn validate(&self) -> Result<()> {
        let s = self.s;
        let strip = (s.im == 0.0 && s.re.abs() < 0.5) || s.re == 0.0;
        if !strip {
            return Err(Error::Domain(format!("s = {s} not in iR or (-1/2, 1/2)")));
        }
        if self.l == 0 {
            return Err(Error::Domain("shift l must be nonzero".into()));
        }
        if self.x < 1.0 {
            return Err(Error::Domain(format!("x must be >= 1, got {}", self.x)));
        }
        if self.k < 2 {
            return Err(Error::Domain(format!("weight k must be >= 2, got {}", self.k)));
        }
        Ok(())
    }
}

/// Gamma(k-1)/(4 pi)^{k-1}.
pub fn weight_factor(k: u32) -> f64 {
    let k1 = k as f64 - 1.0;
    (ln_gamma_real(k1) - k1 * (4.0 * PI).ln()).exp()
}

/// Gamma(k-1)/(4 pi)^{k-1} sqrt(mn) max(1, max(m,n)/(xk))^{-A}.
pub fn lemma_bound(q: &WeightedQuery, n: u64, a: i32) -> f64 {
    let m = (n as i64 + q.l) as f64;
    let nf = n as f64;
    let ratio = (m.max(nf) / (q.x * q.k as f64)).max(1.0);
    weight_factor(q.k) * (m * nf).sqrt() * ratio.powi(-a)
}

/// I_s(l, n, x) = int h(xy) kappa_s(ly) kappa_f(my) kappa_f(ny) y^{-2} dy by adaptive
/// quadrature over the support of h(x .), with the lemma bound at exponent `a`.
pub fn shift_integral_is(q: &WeightedQuery, n: u64, h: &BumpFunction, a: i32) -> Result<(f64, f64)> {
    q.validate()?;
    let m = n as i64 + q.l;
    if n < 1 || m < 1 {
        return Err(Error::Domain(format!("need n >= 1 and m = n + l >= 1 (n = {n}, l = {})", q.l)));
    }
    let (y0, y1) = h.support();
    let (lo, hi) = (y0 / q.x, y1 / q.x);
    let (mf, nf, lf, k) = (m as f64, n as f64, q.l as f64, q.k);
    let integrand = |y: f64| {
        let ks = kappa_bessel(q.s, lf * y).re;
        h.eval(q.x * y) * ks * kappa_holomorphic(k, mf * y) * kappa_holomorphic(k, nf * y) / (y * y)
    };
    let r = integrate(integrand, lo, hi, 1e-12, 1e-300)?;
    Ok((r.value, lemma_bound(q, n, a)))
}

/// Envelope for |lambda(m)lambda(n)|/sqrt(mn) * |I_s(l,n,x)|, valid once the
/// maximum of y^{k-2} e^{-2pi(m+n)y} on the support sits at its left end.
struct Envelope {
    a: f64,
    b: f64,
    k: f64,
    l: i64,
    hsup: f64,
}

impl Envelope {
    fn term(&self, n: u64) -> f64 {
        let m = (n as i64 + self.l) as f64;
        let nf = n as f64;
        let s = m + nf;
        let ystar = ((self.k - 2.0) / (2.0 * PI * s)).clamp(self.a, self.b);
        let log_peak = 0.5 * self.k * (m * nf).ln() + (self.k - 2.0) * ystar.ln() - 2.0 * PI * s * ystar;
        4.0 * self.hsup * (self.b - self.a) * log_peak.exp()
    }

    /// Bound on sum_{n' > n} term(n') (infinite if the geometric regime is not reached).
    fn tail_after(&self, n: u64) -> f64 {
        let n1 = n + 1;
        let s = (n1 as i64 + self.l) as f64 + n1 as f64;
        if (self.k - 2.0) / (2.0 * PI * s) > self.a {
            return f64::INFINITY;
        }
        let m1 = (n1 as i64 + self.l) as f64;
        let rho = (((m1 + 1.0) * (n1 as f64 + 1.0)) / (m1 * n1 as f64)).powf(0.5 * self.k)
            * (-4.0 * PI * self.a).exp();
        if rho >= 1.0 {
            return f64::INFINITY;
        }
        self.term(n1) / (1.0 - rho)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedSum {
    pub value: f64,
    pub last_n: u64,
    pub tail_bound: f64,
}

/// S_s(l, x) = sum lambda(m) lambda(n) / sqrt(mn) I_s(l, n, x), ascending n, stopped
/// once a certified envelope bounds the remaining terms by 1e-10 of the running value.
pub fn weighted_shifted_sum(table: &CoefficientTable, q: &WeightedQuery, h: &BumpFunction) -> Result<WeightedSum> {
    q.validate()?;
    let (y0, y1) = h.support();
    let env = Envelope { a: y0 / q.x, b: y1 / q.x, k: q.k as f64, l: q.l, hsup: h.sup() };
    let cap = (DEFAULT_T * q.x * q.k as f64).ceil() as u64;
    let n_start = 1.max(1 - q.l) as u64;
    let shift = q.l.max(0) as u64;
    let mut value = 0.0;
    let mut n = n_start;
    // Evaluate in blocks so independent integrals can run in parallel.
    const BLOCK: u64 = 16;
    loop {
        let last = (n + BLOCK - 1).min(table.n_max().saturating_sub(shift));
        if last < n {
            let required = required_range(&env, value, n, shift);
            return Err(Error::InsufficientRange { required, available: table.n_max() });
        }
        let block: Vec<u64> = (n..=last).collect();
        let terms: Vec<Result<f64>> = block
            .par_iter()
            .map(|&nn| {
                let lam = table.lambda((nn as i64 + q.l) as u64) * table.lambda(nn);
                if lam == 0.0 {
                    return Ok(0.0);
                }
                let mn = ((nn as i64 + q.l) as f64 * nn as f64).sqrt();
                Ok(lam / mn * shift_integral_is(q, nn, h, 3)?.0)
            })
            .collect();
        for (nn, t) in block.iter().zip(terms) {
            value += t?;
            let tail = env.tail_after(*nn);
            if tail <= SUM_REL_TOL * value.abs() || tail < 1e-300 {
                return Ok(WeightedSum { value, last_n: *nn, tail_bound: tail });
            }
            if *nn >= cap {
                return Err(Error::Refused(format!(
                    "tail not certified by n = {cap} = T x k; remaining bound {tail:e}"
                )));
            }
        }
        n = last + 1;
    }
}

fn required_range(env: &Envelope, value: f64, from: u64, shift: u64) -> u64 {
    let mut n = from;
    loop {
        let t = env.tail_after(n);
        if t <= SUM_REL_TOL * value.abs() || t < 1e-300 {
            return n + shift;
        }
        n += 1;
    }
}

/// Gamma(k-1)/(4pi)^{k-1} xk / log(xk)^{2-eps} prod_{p <= xk} (1 + 2|lambda(p)|/p).
pub fn corollary_bound(table: &CoefficientTable, x: f64, k: u32, eps: f64) -> Result<f64> {
    let xk = x * k as f64;
    let primes = arith::primes_up_to(xk.floor() as u64);
    if let Some(&p) = primes.last() {
        table.require(p)?;
    }
    let prod: f64 = primes.iter().map(|&p| 1.0 + 2.0 * table.lambda(p).abs() / p as f64).product();
    Ok(weight_factor(k) * xk / xk.ln().powf(2.0 - eps) * prod)
}

/// sum_{d | q} S_s(d l, d Y), divisors evaluated independently and combined in ascending order.
pub fn divisor_weighted_sum(
    table: &CoefficientTable,
    q: u64,
    base: &WeightedQuery,
    big_y: f64,
    h: &BumpFunction,
) -> Result<(f64, Vec<(u64, f64)>)> {
    if big_y < 1.0 {
        return Err(Error::Domain(format!("Y must be >= 1, got {big_y}")));
    }
    let ds = arith::divisors(q);
    let parts: Vec<Result<(u64, f64)>> = ds
        .par_iter()
        .map(|&d| {
            let qd = WeightedQuery { l: base.l * d as i64, x: big_y * d as f64, ..*base };
            Ok((d, weighted_shifted_sum(table, &qd, h)?.value))
        })
        .collect();
    let parts: Vec<(u64, f64)> = parts.into_iter().collect::<Result<_>>()?;
    let total = parts.iter().map(|&(_, v)| v).sum();
    Ok((total, parts))
}

/// Gamma(k-1)/(4pi)^{k-1} qkY / log(qk)^{2-eps} prod_{p <= qk} (1 + 2|lambda(p)|/p).
pub fn sums_of_sums_bound(table: &CoefficientTable, q: u64, k: u32, big_y: f64, eps: f64) -> Result<f64> {
    let qk = (q * k as u64) as f64;
    let primes = arith::primes_up_to(qk as u64);
    if let Some(&p) = primes.last() {
        table.require(p)?;
    }
    let prod: f64 = primes.iter().map(|&p| 1.0 + 2.0 * table.lambda(p).abs() / p as f64).product();
    Ok(weight_factor(k) * qk * big_y / qk.ln().powf(2.0 - eps) * prod)
}
