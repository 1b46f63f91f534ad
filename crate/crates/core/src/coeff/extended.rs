use crate::error::{Error, Result};
use crate::ext::{ext_from_bigint, ext_from_int, ext_sqrt, ext_to_f64, ExtReal};
use num_bigint::BigInt;
use num_traits::One;

/// lambda(n) held at a configurable number of significand bits.
#[derive(Clone, Debug)]
pub struct ExtendedLambda {
    pub bits: usize,
    pub weight: u32,
    values: Vec<ExtReal>,
}

impl ExtendedLambda {
    pub fn lambda(&self, n: u64) -> &ExtReal {
        &self.values[(n - 1) as usize]
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64
    }

    /// |p lambda(p)^2 - 1| rounded to f64.
    pub fn level_residual(&self, p: u64) -> f64 {
        let l = self.lambda(p);
        let v = l * l * ext_from_int(p as i64, self.bits) - ext_from_int(1, self.bits);
        ext_to_f64(&v).abs()
    }
}

/// lambda(n) = a(n) / (n^{(k-2)/2} sqrt(n)) at `bits` bits.
pub fn normalize_extended(raw: &[BigInt], weight: u32, bits: usize) -> Result<ExtendedLambda> {
    if raw.first().is_none_or(|a| !a.is_one()) {
        return Err(Error::NotNormalized(raw.first().map_or("none".into(), |a| a.to_string())));
    }
    if weight < 2 || !weight.is_multiple_of(2) {
        return Err(Error::Domain(format!("weight must be even and >= 2, got {weight}")));
    }
    if bits < 53 {
        return Err(Error::Domain(format!("extended precision needs >= 53 bits, got {bits}")));
    }
    let values = raw
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let n = BigInt::from(i + 1);
            let scale = ext_from_bigint(&n.pow((weight - 2) / 2), bits) * ext_sqrt(&ext_from_bigint(&n, bits));
            ext_from_bigint(a, bits) / scale
        })
        .collect();
    Ok(ExtendedLambda { bits, weight, values })
}
