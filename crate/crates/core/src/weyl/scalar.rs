//! Scalar rings for local computations: complex floats, exact Q(sqrt p),
//! and extended-precision complex numbers.

use crate::error::{Error, Result};
use crate::ext::{ext_from_int, ext_sqrt, ext_to_f64, ExtComplex};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait LocalScalar:
    Clone + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    /// num/den in the same ring (and precision) as `self`.
    fn ratio_like(&self, num: i64, den: i64) -> Self;
    /// sqrt(p) in the same ring as `self`.
    fn sqrt_like(&self, p: u64) -> Self;
    /// Zero test: exact for exact rings, |x| <= tol otherwise.
    fn is_negligible(&self, tol: f64) -> bool;
    /// |x| rounded to f64.
    fn magnitude(&self) -> f64;
    fn exact() -> bool;

    fn powu(&self, m: u32) -> Self {
        let mut out = self.ratio_like(1, 1);
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                out = out * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        out
    }
}

impl LocalScalar for Complex64 {
    fn ratio_like(&self, num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn sqrt_like(&self, p: u64) -> Self {
        Complex64::new((p as f64).sqrt(), 0.0)
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn exact() -> bool {
        false
    }
}

impl LocalScalar for ExtComplex {
    fn ratio_like(&self, num: i64, den: i64) -> Self {
        let v = ext_from_int(num, self.bits) / ext_from_int(den, self.bits);
        ExtComplex::real(v, self.bits)
    }
    fn sqrt_like(&self, p: u64) -> Self {
        ExtComplex::real(ext_sqrt(&ext_from_int(p as i64, self.bits)), self.bits)
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.magnitude() <= tol
    }
    fn magnitude(&self) -> f64 {
        ext_to_f64(&self.norm_sqr()).sqrt()
    }
    fn exact() -> bool {
        false
    }
}

/// u + v sqrt(p) with rational u, v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub p: u64,
    pub u: BigRational,
    pub v: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QuadExt {
    pub fn new(p: u64, u: BigRational, v: BigRational) -> Self {
        QuadExt { p, u, v }
    }

    pub fn rational(p: u64, u: BigRational) -> Self {
        QuadExt { p, u, v: BigRational::zero() }
    }

    pub fn from_ratio(p: u64, n: i64, d: i64) -> Self {
        QuadExt::rational(p, rat(n, d))
    }

    pub fn conj(&self) -> Self {
        QuadExt { p: self.p, u: self.u.clone(), v: -self.v.clone() }
    }

    /// u^2 - p v^2.
    pub fn norm(&self) -> BigRational {
        &self.u * &self.u - &self.v * &self.v * BigRational::from_integer(BigInt::from(self.p))
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// Exact sign of u + v sqrt(p).
    pub fn signum(&self) -> Ordering {
        let su = self.u.cmp(&BigRational::zero());
        let sv = self.v.cmp(&BigRational::zero());
        if su == sv || sv == Ordering::Equal {
            return su;
        }
        if su == Ordering::Equal {
            return sv;
        }
        // Opposite signs: compare u^2 with p v^2.
        let n = self.norm();
        match n.cmp(&BigRational::zero()) {
            Ordering::Greater => su,
            Ordering::Less => sv,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.u.to_f64().unwrap_or(f64::NAN) + self.v.to_f64().unwrap_or(f64::NAN) * (self.p as f64).sqrt()
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.p, o.p, "mixing Q(sqrt {}) and Q(sqrt {})", self.p, o.p);
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::Pole("inverse of zero in Q(sqrt p)".into()));
        }
        Ok(QuadExt { p: self.p, u: &self.u / &n, v: -&self.v / &n })
    }
}

impl Add for QuadExt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.check(&o);
        QuadExt { p: self.p, u: self.u + o.u, v: self.v + o.v }
    }
}

impl Sub for QuadExt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.check(&o);
        QuadExt { p: self.p, u: self.u - o.u, v: self.v - o.v }
    }
}

impl Mul for QuadExt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.check(&o);
        let p = BigRational::from_integer(BigInt::from(self.p));
        QuadExt { p: self.p, u: &self.u * &o.u + &self.v * &o.v * p, v: &self.u * &o.v + &self.v * &o.u }
    }
}

impl Div for QuadExt {
    type Output = Self;
    /// Panics on division by zero; callers test `is_negligible` first.
    fn div(self, o: Self) -> Self {
        self.check(&o);
        self * o.inverse().expect("division by zero in Q(sqrt p)")
    }
}

impl Neg for QuadExt {
    type Output = Self;
    fn neg(self) -> Self {
        QuadExt { p: self.p, u: -self.u, v: -self.v }
    }
}

impl LocalScalar for QuadExt {
    fn ratio_like(&self, num: i64, den: i64) -> Self {
        QuadExt::from_ratio(self.p, num, den)
    }
    fn sqrt_like(&self, p: u64) -> Self {
        assert_eq!(p, self.p, "sqrt({p}) is not in Q(sqrt {})", self.p);
        QuadExt { p, u: BigRational::zero(), v: BigRational::one() }
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    fn exact() -> bool {
        true
    }
}

/// |x| < sqrt(p) decided exactly for x in Q(sqrt p).
pub fn quad_abs_below_sqrt_p(x: &QuadExt) -> bool {
    let p = QuadExt::from_ratio(x.p, x.p as i64, 1);
    let gap = p - x.clone() * x.clone();
    gap.signum() == Ordering::Greater
}
