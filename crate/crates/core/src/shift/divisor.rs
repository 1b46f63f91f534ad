use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivisorRatio {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// sum_{d | q} d / log(dk)^{2-eps} against q loglog(e^e q) / log(qk)^{2-eps}.
pub fn divisor_lemma_ratio(q: u64, k: u32, eps: f64) -> Result<DivisorRatio> {
    if q == 0 || !arith::is_squarefree(q) {
        return Err(Error::Domain(format!("q = {q} is not squarefree")));
    }
    if k < 2 || k % 2 == 1 {
        return Err(Error::Domain(format!("k must be even and >= 2, got {k}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let omega = arith::factorize(q).len();
    if omega > 30 {
        return Err(Error::Refused(format!("omega(q) = {omega} > 30")));
    }
    let e = 2.0 - eps;
    let kf = k as f64;
    let lhs: f64 = arith::divisors(q).iter().map(|&d| d as f64 / (d as f64 * kf).ln().powf(e)).sum();
    let qf = q as f64;
    let rhs = qf * (std::f64::consts::E + qf.ln()).ln() / (qf * kf).ln().powf(e);
    Ok(DivisorRatio { lhs, rhs, ratio: lhs / rhs })
}
