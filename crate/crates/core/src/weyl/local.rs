//! Macdonald matrix coefficients and the local triple-product integral.

use super::element::enumerate_weyl;
use super::scalar::{quad_abs_below_sqrt_p, LocalScalar, QuadExt};
use crate::coeff::SatakeLocalData;
use crate::arith;
use crate::error::{Error, Result};
use crate::ext::ExtComplex;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Threshold below which alpha - beta counts as zero in floating modes.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Threshold below which a local-factor denominator counts as a pole.
pub const POLE_TOL: f64 = 1e-14;

impl SatakeLocalData<QuadExt> {
    /// Exact pair (alpha, 1/alpha) over Q(sqrt p).
    pub fn exact(p: u64, alpha: QuadExt) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::Domain(format!("p = {p} is not prime")));
        }
        if alpha.p != p {
            return Err(Error::Domain(format!("alpha lives in Q(sqrt {}), not Q(sqrt {p})", alpha.p)));
        }
        let beta = alpha.inverse()?;
        if !quad_abs_below_sqrt_p(&alpha) || !quad_abs_below_sqrt_p(&beta) {
            return Err(Error::Domain(format!("|alpha|, |beta| must be < sqrt({p})")));
        }
        Ok(SatakeLocalData { p, alpha, beta })
    }

    pub fn exact_rational(p: u64, num: i64, den: i64) -> Result<Self> {
        Self::exact(p, QuadExt::from_ratio(p, num, den))
    }
}

impl SatakeLocalData<ExtComplex> {
    /// alpha = e^{i theta} rounded to `bits`, beta = 1/alpha at the same precision.
    pub fn extended_unit_circle(p: u64, theta: f64, bits: usize) -> Self {
        let alpha = ExtComplex::from_f64(theta.cos(), theta.sin(), bits);
        let one = alpha.ratio_like(1, 1);
        let beta = one / alpha.clone();
        SatakeLocalData { p, alpha, beta }
    }
}

fn check_nondegenerate<S: LocalScalar>(s: &SatakeLocalData<S>) -> Result<()> {
    if (s.alpha.clone() - s.beta.clone()).is_negligible(DEGENERACY_TOL) {
        return Err(Error::DegenerateSatake { p: s.p, root: s.alpha.magnitude() });
    }
    Ok(())
}

/// The two Macdonald weights c_alpha, c_beta.
fn macdonald_weights<S: LocalScalar>(s: &SatakeLocalData<S>) -> (S, S) {
    let one = s.alpha.ratio_like(1, 1);
    let inv_p = s.alpha.ratio_like(1, s.p as i64);
    let ba = s.beta.clone() / s.alpha.clone();
    let ab = s.alpha.clone() / s.beta.clone();
    let ca = (one.clone() - inv_p.clone() * ba.clone()) / (one.clone() - ba);
    let cb = (one.clone() - inv_p * ab.clone()) / (one - ab);
    (ca, cb)
}

/// Phi(m) = (1+1/p)^{-1} p^{-m/2} [alpha^m c_alpha + beta^m c_beta].
pub fn macdonald_coefficient<S: LocalScalar>(s: &SatakeLocalData<S>, m: u32) -> Result<S> {
    check_nondegenerate(s)?;
    let (ca, cb) = macdonald_weights(s);
    let sp = s.alpha.sqrt_like(s.p);
    let norm = s.alpha.ratio_like(s.p as i64, s.p as i64 + 1);
    let spm = sp.powu(m);
    Ok(norm * (s.alpha.powu(m) * ca + s.beta.powu(m) * cb) / spm)
}

/// Brute-force I_p over canonical Weyl elements with lam <= lam_max.
///
/// The returned bound covers the omitted terms plus, in floating modes, the
/// accumulated rounding (64 eps times the sum of term magnitudes).
pub fn ip_brute_force<S: LocalScalar>(s: &SatakeLocalData<S>, lam_max: u32) -> Result<(S, f64)> {
    if lam_max < 2 {
        return Err(Error::Domain(format!("lam_max must be >= 2, got {lam_max}")));
    }
    check_nondegenerate(s)?;
    let (ca, cb) = macdonald_weights(s);
    let one = s.alpha.ratio_like(1, 1);
    let inv_sp = one.clone() / s.alpha.sqrt_like(s.p);
    let inv_p = s.alpha.ratio_like(1, s.p as i64);
    let norm = s.alpha.ratio_like(s.p as i64, s.p as i64 + 1);

    // Phi(m) for m <= lam_max + 1 and p^{-lam} for lam <= lam_max, built incrementally.
    let mut phi = Vec::with_capacity(lam_max as usize + 2);
    let (mut am, mut bm, mut sm) = (one.clone(), one.clone(), one.clone());
    for _ in 0..=lam_max + 1 {
        phi.push(norm.clone() * (am.clone() * ca.clone() + bm.clone() * cb.clone()) * sm.clone());
        am = am * s.alpha.clone();
        bm = bm * s.beta.clone();
        sm = sm * inv_sp.clone();
    }
    let mut p_pow = vec![one.clone()];
    for l in 1..=lam_max as usize {
        p_pow.push(p_pow[l - 1].clone() * inv_p.clone());
    }
    let mut total = one.ratio_like(0, 1);
    let mut mass = 0.0;
    for (_, mu, lam) in enumerate_weyl(lam_max) {
        let term = phi[mu as usize].clone() * p_pow[lam as usize].clone();
        mass += term.magnitude();
        total = total + term;
    }
    let value = total * s.alpha.ratio_like(1, s.p as i64 + 1);

    let pf = s.p as f64;
    let r = s.alpha.magnitude().max(s.beta.magnitude()) / pf.sqrt();
    let k = (ca.magnitude() + cb.magnitude()) / (1.0 + 1.0 / pf);
    let q = r / pf;
    let tail = k * (1.0 / r + 2.0 + r) * q.powi(lam_max as i32 + 1) / (1.0 - q) / (pf + 1.0);
    let rounding = if S::exact() { 0.0 } else { 64.0 * f64::EPSILON * (mass + k) };
    Ok((value, tail + rounding))
}

fn nonzero<S: LocalScalar>(x: S, what: &str) -> Result<S> {
    if x.is_negligible(POLE_TOL) {
        Err(Error::Pole(format!("{what} vanishes")))
    } else {
        Ok(x)
    }
}

/// I_p = p^{-1}(1-p^{-1})(1+alpha p^{-1/2})(1+beta p^{-1/2}) / ((1-alpha p^{-3/2})(1-beta p^{-3/2})).
pub fn ip_closed_form<S: LocalScalar>(s: &SatakeLocalData<S>) -> Result<S> {
    let one = s.alpha.ratio_like(1, 1);
    let inv_p = s.alpha.ratio_like(1, s.p as i64);
    let inv_sp = one.clone() / s.alpha.sqrt_like(s.p);
    let inv_sp3 = inv_sp.clone() * inv_p.clone();
    let num = inv_p.clone()
        * (one.clone() - inv_p)
        * (one.clone() + s.alpha.clone() * inv_sp.clone())
        * (one.clone() + s.beta.clone() * inv_sp);
    let den = (one.clone() - s.alpha.clone() * inv_sp3.clone()) * (one - s.beta.clone() * inv_sp3);
    Ok(num / nonzero(den, "1 - alpha p^{-3/2} or 1 - beta p^{-3/2}")?)
}

/// Which evaluation of I_p feeds the normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IpSource {
    ClosedForm,
    BruteForce { lam_max: u32 },
}

/// Local factors entering the normalization of I_p.
#[derive(Clone, Debug)]
pub struct LocalFactors<S> {
    pub zeta2: S,
    pub l_ad_phi: S,
    pub l_ad_f: S,
    pub l_triple: S,
}

pub fn local_factors<S: LocalScalar>(s: &SatakeLocalData<S>) -> Result<LocalFactors<S>> {
    let one = s.alpha.ratio_like(1, 1);
    let inv_p = s.alpha.ratio_like(1, s.p as i64);
    let inv_sp = one.clone() / s.alpha.sqrt_like(s.p);
    let inv_sp3 = inv_sp.clone() * inv_p.clone();
    let zeta2 = one.clone() / (one.clone() - inv_p.clone() * inv_p.clone());
    let ad = (one.clone() - s.alpha.clone() * s.alpha.clone() * inv_p.clone())
        * (one.clone() - inv_p.clone())
        * (one.clone() - s.beta.clone() * s.beta.clone() * inv_p);
    let l_ad_phi = one.clone() / nonzero(ad, "L_p(1, ad phi)^{-1}")?;
    let trip = (one.clone() - s.alpha.clone() * inv_sp.clone())
        * (one.clone() - s.beta.clone() * inv_sp)
        * (one.clone() - s.alpha.clone() * inv_sp3.clone())
        * (one.clone() - s.beta.clone() * inv_sp3);
    let l_triple = one / nonzero(trip, "L_p(1/2, phi x f x f)^{-1}")?;
    Ok(LocalFactors { l_ad_f: zeta2.clone(), zeta2, l_ad_phi, l_triple })
}

/// Normalized integral: I_p divided by
/// (zeta_p(2)^3 / zeta_p(2)) L_p(1/2, phi x f x f) / (L_p(1, ad phi) L_p(1, ad f)^2).
pub fn tilde_ip<S: LocalScalar>(s: &SatakeLocalData<S>, source: IpSource) -> Result<S> {
    let ip = match source {
        IpSource::ClosedForm => ip_closed_form(s)?,
        IpSource::BruteForce { lam_max } => ip_brute_force(s, lam_max)?.0,
    };
    let f = local_factors(s)?;
    let z3 = f.zeta2.clone() * f.zeta2.clone() * f.zeta2.clone();
    let normalizer = (z3 / f.zeta2.clone()) * f.l_triple / (f.l_ad_phi * f.l_ad_f.clone() * f.l_ad_f);
    Ok(ip / normalizer)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitCase {
    /// p divides none of the three levels.
    None,
    /// p divides exactly two.
    Two,
    /// p divides all three.
    Three,
}

/// c_p: 1, 1/p, or p^{-1}(1+p^{-1})(1+eps_p).
pub fn watson_local_factor(p: u64, case: SplitCase, eps: Option<i8>) -> Result<BigRational> {
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let pi = p as i64;
    match (case, eps) {
        (SplitCase::None, None) => Ok(BigRational::one()),
        (SplitCase::Two, None) => Ok(r(1, pi)),
        (SplitCase::Three, Some(e)) if e == 1 || e == -1 => Ok(r(1, pi) * r(pi + 1, pi) * r(1 + e as i64, 1)),
        (SplitCase::Three, Some(e)) => Err(Error::Domain(format!("eps_p must be +-1, got {e}"))),
        (SplitCase::Three, None) => Err(Error::Domain("eps_p required when p divides all three levels".into())),
        (_, Some(_)) => Err(Error::Domain("eps_p given for a case that does not use it".into())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WatsonFinitePart {
    pub per_prime: BTreeMap<u64, BigRational>,
    /// prod_{p | q} tilde I_p.
    pub product: BigRational,
    /// product / 8.
    pub constant: BigRational,
}

/// Exact prod_{p | q} tilde I_p; fails if any factor differs from 1/p.
pub fn watson_finite_part(q: u64, satake: &BTreeMap<u64, SatakeLocalData<QuadExt>>) -> Result<WatsonFinitePart> {
    if !arith::is_squarefree(q) {
        return Err(Error::Domain(format!("q = {q} is not squarefree")));
    }
    let mut per_prime = BTreeMap::new();
    let mut product = BigRational::one();
    for (p, _) in arith::factorize(q) {
        let s = satake.get(&p).ok_or(Error::IncompleteData(p))?;
        let t = tilde_ip(s, IpSource::ClosedForm)?;
        let want = BigRational::new(BigInt::from(1), BigInt::from(p));
        if !t.v.is_zero() || t.u != want {
            return Err(Error::Consistency(format!("tilde I_{p} = {} + {} sqrt({p}) != 1/{p}", t.u, t.v)));
        }
        product *= &t.u;
        per_prime.insert(p, t.u);
    }
    let constant = &product / BigRational::from_integer(BigInt::from(8));
    Ok(WatsonFinitePart { per_prime, product, constant })
}

/// Float-mode convenience: brute-force I_p and its tail for a unit-circle pair.
pub fn unit_circle_ip(p: u64, theta: f64, lam_max: u32) -> Result<(Complex64, f64)> {
    ip_brute_force(&SatakeLocalData::unit_circle(p, theta), lam_max)
}
