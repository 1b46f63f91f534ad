use crate::arith;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn r(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn inv_pow(num: u64, p: u64, i: u32) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(p).pow(i))
}

/// psi(l) = sum_{c | l} (1/c) ((l/c)/phi(l/c)) prod_{p^nu || c} (3nu+3)^2, by the definition.
pub fn psi_function(l: u64) -> BigRational {
    assert!(l >= 1);
    let mut total = BigRational::zero();
    for c in arith::divisors(l) {
        let e = l / c;
        let weight: u64 = arith::factorize(c).iter().map(|&(_, nu)| (3 * nu as u64 + 3).pow(2)).product();
        total += r(e * weight, c * arith::euler_phi(e));
    }
    total
}

/// psi(p^a) = 1/(1-1/p) + 9/(1-1/p) sum_{i=1}^{a-1} (i+1)^2/p^i + 9(a+1)^2/p^a.
pub fn psi_prime_power(p: u64, a: u32) -> BigRational {
    if a == 0 {
        return BigRational::one();
    }
    let geom = r(p, p - 1);
    let mut sum = BigRational::zero();
    for i in 1..a {
        sum += inv_pow((i as u64 + 1).pow(2), p, i);
    }
    &geom + r(9, 1) * &geom * sum + inv_pow(9 * (a as u64 + 1).pow(2), p, a)
}

/// The expression 1/(1-1/p) + (9/p^a)((a+1)^2 + 1/(1-1/p) sum_{i=1}^{a-1} (i+1)^2/p^i),
/// which agrees with the definition only for a = 1.
pub fn psi_prime_power_as_printed(p: u64, a: u32) -> BigRational {
    if a == 0 {
        return BigRational::one();
    }
    let geom = r(p, p - 1);
    let mut sum = BigRational::zero();
    for i in 1..a {
        sum += inv_pow((i as u64 + 1).pow(2), p, i);
    }
    &geom + inv_pow(9, p, a) * (r((a as u64 + 1).pow(2), 1) + &geom * sum)
}

/// Product of the prime-power closed form over p^a || l.
pub fn psi_closed_form(l: u64) -> BigRational {
    arith::factorize(l).into_iter().map(|(p, a)| psi_prime_power(p, a)).product()
}
