use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    U,
    V,
}

/// u_{abn} or v_{abn}; u_{a00} = v_{a00} is kept only as U.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub family: Family,
    pub a: u8,
    pub b: u8,
    pub n: u32,
}

impl WeylElement {
    pub fn new(family: Family, a: u8, b: u8, n: u32) -> Option<Self> {
        if a > 1 || b > 1 || (family == Family::V && b == 0 && n == 0) {
            return None;
        }
        Some(WeylElement { family, a, b, n })
    }

    pub fn mu(&self) -> u32 {
        match self.family {
            Family::U => 2 * self.n + self.a as u32,
            Family::V => 2 * (self.n + self.b as u32) - self.a as u32,
        }
    }

    pub fn lam(&self) -> u32 {
        2 * self.n + self.b as u32
    }

    fn sort_key(&self) -> (u32, u32, Family, u8) {
        (self.lam(), self.mu(), self.family, self.a)
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// All canonical elements with lam <= lam_max as (w, mu, lam), sorted by (lam, mu, family, a).
pub fn enumerate_weyl(lam_max: u32) -> Vec<(WeylElement, u32, u32)> {
    let mut out = Vec::new();
    for family in [Family::U, Family::V] {
        for b in 0..=1u8 {
            for a in 0..=1u8 {
                let mut n = 0;
                while 2 * n + b as u32 <= lam_max {
                    if let Some(w) = WeylElement::new(family, a, b, n) {
                        out.push(w);
                    }
                    n += 1;
                }
            }
        }
    }
    out.sort();
    out.into_iter().map(|w| (w, w.mu(), w.lam())).collect()
}

/// Truncated power series in x, t with exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateSeries {
    pub order: usize,
    /// coeffs[i][j] is the coefficient of x^i t^j.
    pub coeffs: Vec<Vec<BigRational>>,
}

impl BivariateSeries {
    pub fn zero(order: usize) -> Self {
        BivariateSeries { order, coeffs: vec![vec![BigRational::zero(); order + 1]; order + 1] }
    }

    pub fn coeff(&self, i: usize, j: usize) -> &BigRational {
        &self.coeffs[i][j]
    }

    /// (1+x)(1+t) sum_{k<=N} (xt)^k.
    pub fn closed_form(order: usize) -> Self {
        let mut s = BivariateSeries::zero(order);
        let one = BigRational::from_integer(BigInt::from(1));
        for k in 0..=order {
            for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                let (i, j) = (k + di, k + dj);
                if i <= order && j <= order {
                    s.coeffs[i][j] += &one;
                }
            }
        }
        s
    }

    /// max |self - other| over entries with i + j <= order.
    pub fn residual(&self, other: &Self) -> BigRational {
        let mut worst = BigRational::zero();
        for i in 0..=self.order {
            for j in 0..=(self.order - i) {
                let d = (&self.coeffs[i][j] - &other.coeffs[i][j]).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }
}

/// Builds sum_w x^{mu(w)} t^{lam(w)} by enumeration and compares it with the
/// closed form; returns (series, residual, residual of the x = 1 specialization
/// against 2(1+t)/(1-t)).
pub fn weyl_generating_function(order: usize) -> (BivariateSeries, BigRational, BigRational) {
    let mut s = BivariateSeries::zero(order);
    let one = BigRational::from_integer(BigInt::from(1));
    let mut by_lam = vec![BigRational::zero(); order + 1];
    for (_, mu, lam) in enumerate_weyl(order as u32) {
        if (mu as usize) <= order {
            s.coeffs[mu as usize][lam as usize] += &one;
        }
        by_lam[lam as usize] += &one;
    }
    let residual = s.residual(&BivariateSeries::closed_form(order));
    let mut spec_residual = BigRational::zero();
    for (j, c) in by_lam.iter().enumerate() {
        let want = BigRational::from_integer(BigInt::from(if j == 0 { 2 } else { 4 }));
        let d = (c - want).abs();
        if d > spec_residual {
            spec_residual = d;
        }
    }
    (s, residual, spec_residual)
}
