//! Newform coefficient data: generation, normalization, Hecke extension,
//! Satake parameters and the adjoint L-value at s = 1.

mod adjoint;
mod eta;
mod extended;
mod hecke;
pub(crate) mod io;
mod satake;

pub use adjoint::{adjoint_l_at_1, adjoint_l_from_satake, AdjointL};
pub use eta::{eta_product_expansion, EtaPattern};
pub use extended::{normalize_extended, ExtendedLambda};
pub use hecke::{hecke_extend, hecke_extend_raw};
pub use io::{export_coefficients, ingest_coefficients, read_meta, CoefficientFormat};
pub use satake::{satake_from_lambda, SatakeLocalData};

use crate::arith;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct NewformDescriptor {
    pub weight: u32,
    pub level: u64,
    pub atkin_lehner: BTreeMap<u64, i8>,
}

impl NewformDescriptor {
    pub fn new(weight: u32, level: u64) -> Result<Self> {
        let d = NewformDescriptor { weight, level, atkin_lehner: BTreeMap::new() };
        d.validate()?;
        Ok(d)
    }

    pub fn delta() -> Self {
        NewformDescriptor { weight: 12, level: 1, atkin_lehner: BTreeMap::new() }
    }

    /// Level 11 weight 2; the Atkin-Lehner eigenvalue at 11 is -a(11) = -1.
    pub fn f11() -> Self {
        NewformDescriptor { weight: 2, level: 11, atkin_lehner: BTreeMap::from([(11, -1)]) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.weight < 2 || !self.weight.is_multiple_of(2) {
            return Err(Error::Domain(format!("weight must be even and >= 2, got {}", self.weight)));
        }
        if !arith::is_squarefree(self.level) {
            return Err(Error::Domain(format!("level {} is not squarefree", self.level)));
        }
        for (&p, &s) in &self.atkin_lehner {
            if !arith::is_prime(p) || !self.level.is_multiple_of(p) {
                return Err(Error::Domain(format!("Atkin-Lehner key {p} does not divide level")));
            }
            if s != 1 && s != -1 {
                return Err(Error::Domain(format!("Atkin-Lehner sign at {p} must be +-1")));
            }
        }
        Ok(())
    }

    pub fn divides_level(&self, p: u64) -> bool {
        self.level.is_multiple_of(p)
    }
}

/// Normalized Hecke eigenvalues lambda(1..=N_max), optionally with the raw integers.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    pub descriptor: NewformDescriptor,
    lambda: Vec<f64>,
    raw: Option<Vec<BigInt>>,
}

impl CoefficientTable {
    /// Builds a table without validating invariants.
    pub fn from_lambda(descriptor: NewformDescriptor, lambda: Vec<f64>) -> Self {
        CoefficientTable { descriptor, lambda, raw: None }
    }

    pub fn n_max(&self) -> u64 {
        self.lambda.len() as u64
    }

    /// lambda(n) for 1 <= n <= N_max.
    #[inline]
    pub fn lambda(&self, n: u64) -> f64 {
        self.lambda[(n - 1) as usize]
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambda
    }

    pub fn raw(&self) -> Option<&[BigInt]> {
        self.raw.as_deref()
    }

    pub fn weight(&self) -> u32 {
        self.descriptor.weight
    }

    pub fn level(&self) -> u64 {
        self.descriptor.level
    }

    pub fn require(&self, n: u64) -> Result<()> {
        if n > self.n_max() {
            Err(Error::InsufficientRange { required: n, available: self.n_max() })
        } else {
            Ok(())
        }
    }

    /// Copy truncated to the first `n` entries.
    pub fn truncated(&self, n: u64) -> Self {
        let n = n.min(self.n_max()) as usize;
        CoefficientTable {
            descriptor: self.descriptor.clone(),
            lambda: self.lambda[..n].to_vec(),
            raw: self.raw.as_ref().map(|r| r[..n].to_vec()),
        }
    }

    /// Checks lambda(1) = 1, the Deligne bound, multiplicativity and
    /// lambda(p)^2 = 1/p for p | q. Reports the first violation.
    pub fn validate(&self) -> Result<()> {
        const TOL: f64 = 1e-9;
        const LEVEL_TOL: f64 = 1e-12;
        if self.lambda.is_empty() {
            return Err(Error::Validation { invariant: "table nonempty".into(), witness: 1 });
        }
        if (self.lambda[0] - 1.0).abs() > 0.0 {
            return Err(Error::Validation { invariant: "λ(1) = 1".into(), witness: 1 });
        }
        let n_max = self.lambda.len();
        let spf = arith::smallest_prime_factors(n_max);
        let taus = arith::tau_table(n_max);
        for n in 2..=n_max {
            let l = self.lambda[n - 1];
            if !l.is_finite() || l.abs() > taus[n] as f64 + TOL {
                return Err(Error::Validation { invariant: "|λ(n)| <= τ(n)".into(), witness: n as u64 });
            }
            let p = spf[n] as usize;
            let mut pe = p;
            while (n / pe).is_multiple_of(p) {
                pe *= p;
            }
            if pe != n {
                let prod = self.lambda[pe - 1] * self.lambda[n / pe - 1];
                if (prod - l).abs() > TOL * l.abs().max(1.0) {
                    return Err(Error::Validation {
                        invariant: "λ(mn) = λ(m)λ(n) for gcd(m,n) = 1".into(),
                        witness: n as u64,
                    });
                }
            }
        }
        for (p, _) in arith::factorize(self.descriptor.level) {
            if p as usize <= n_max {
                let l = self.lambda[p as usize - 1];
                if (l * l - 1.0 / p as f64).abs() > LEVEL_TOL {
                    return Err(Error::Validation { invariant: "λ(p)^2 = 1/p for p | q".into(), witness: p });
                }
            }
        }
        Ok(())
    }
}

/// lambda(n) = a(n) / n^{(k-1)/2}.
pub fn normalize_coefficients(raw: &[BigInt], descriptor: NewformDescriptor) -> Result<CoefficientTable> {
    descriptor.validate()?;
    match raw.first() {
        None => return Err(Error::Domain("empty coefficient sequence".into())),
        Some(a1) if !a1.is_one() => return Err(Error::NotNormalized(a1.to_string())),
        _ => {}
    }
    let half = (descriptor.weight as f64 - 1.0) / 2.0;
    let lambda = raw
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let n = (i + 1) as f64;
            a.to_f64().unwrap_or(f64::NAN) / n.powf(half)
        })
        .collect();
    Ok(CoefficientTable { descriptor, lambda, raw: Some(raw.to_vec()) })
}

/// Built-in coefficient sources.
pub fn delta_table(n: u64) -> Result<CoefficientTable> {
    let raw = eta_product_expansion(&EtaPattern::delta(), n)?;
    normalize_coefficients(&raw, NewformDescriptor::delta())
}

pub fn f11_table(n: u64) -> Result<CoefficientTable> {
    let raw = eta_product_expansion(&EtaPattern::f11(), n)?;
    normalize_coefficients(&raw, NewformDescriptor::f11())
}
