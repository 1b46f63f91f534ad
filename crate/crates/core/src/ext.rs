//! Extended-precision binary floats and a minimal complex type over them.

use dashu_float::ops::SquareRoot;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

pub type ExtReal = FBig;

pub fn ext_from_int(v: i64, bits: usize) -> ExtReal {
    FBig::from(IBig::from(v)).with_precision(bits).value()
}

pub fn ext_from_bigint(v: &BigInt, bits: usize) -> ExtReal {
    let i = IBig::from_str(&v.to_string()).expect("decimal integer");
    FBig::from(i).with_precision(bits).value()
}

pub fn ext_from_f64(v: f64, bits: usize) -> ExtReal {
    FBig::try_from(v).expect("finite f64").with_precision(bits).value()
}

pub fn ext_sqrt(v: &ExtReal) -> ExtReal {
    v.sqrt()
}

pub fn ext_to_f64(v: &ExtReal) -> f64 {
    v.to_f64().value()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtComplex {
    pub re: ExtReal,
    pub im: ExtReal,
    pub bits: usize,
}

impl ExtComplex {
    pub fn new(re: ExtReal, im: ExtReal, bits: usize) -> Self {
        ExtComplex { re, im, bits }
    }

    pub fn from_f64(re: f64, im: f64, bits: usize) -> Self {
        ExtComplex { re: ext_from_f64(re, bits), im: ext_from_f64(im, bits), bits }
    }

    pub fn real(re: ExtReal, bits: usize) -> Self {
        ExtComplex { re, im: ext_from_int(0, bits), bits }
    }

    pub fn norm_sqr(&self) -> ExtReal {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        ExtComplex { re: self.re.clone(), im: -self.im.clone(), bits: self.bits }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (ext_to_f64(&self.re), ext_to_f64(&self.im))
    }
}

impl Add for ExtComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ExtComplex { re: self.re + o.re, im: self.im + o.im, bits: self.bits }
    }
}

impl Sub for ExtComplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ExtComplex { re: self.re - o.re, im: self.im - o.im, bits: self.bits }
    }
}

impl Mul for ExtComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        ExtComplex { re, im, bits: self.bits }
    }
}

impl Div for ExtComplex {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = o.norm_sqr();
        let re = (&self.re * &o.re + &self.im * &o.im) / &d;
        let im = (&self.im * &o.re - &self.re * &o.im) / &d;
        ExtComplex { re, im, bits: self.bits }
    }
}

impl Neg for ExtComplex {
    type Output = Self;
    fn neg(self) -> Self {
        ExtComplex { re: -self.re, im: -self.im, bits: self.bits }
    }
}
