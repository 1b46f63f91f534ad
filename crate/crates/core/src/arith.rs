//! Elementary arithmetic on machine integers: sieves, factorization, divisor functions.

use num_integer::Integer;

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest-prime-factor table for `0..=limit` (entries 0 and 1 are 0).
pub fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Sorted list of positive divisors.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// Number of divisors.
pub fn tau(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Divisor counts tau(1..=n) via a sieve; index 0 unused.
pub fn tau_table(n: usize) -> Vec<u32> {
    let mut t = vec![0u32; n + 1];
    for d in 1..=n {
        let mut m = d;
        while m <= n {
            t[m] += 1;
            m += d;
        }
    }
    t
}

/// Upper bound for the sum of 1/p over primes p in (a, b].
///
/// Uses explicit summation below 10^6 and the Rosser-Schoenfeld estimates
/// |sum_{p<=x} 1/p - log log x - B| < 1/(2 log^2 x) beyond.
pub fn prime_reciprocal_sum_upper(a: f64, b: f64) -> f64 {
    const EXPLICIT: f64 = 1.0e6;
    if b <= a {
        return 0.0;
    }
    let mut total = 0.0;
    let lo = a.max(1.0);
    if lo < EXPLICIT {
        let hi = b.min(EXPLICIT);
        for p in primes_up_to(hi.floor() as u64) {
            if (p as f64) > lo {
                total += 1.0 / p as f64;
            }
        }
        if b <= EXPLICIT {
            return total;
        }
    }
    let lo = lo.max(EXPLICIT);
    let (la, lb) = (lo.ln(), b.ln());
    total + lb.ln() - la.ln() + 0.5 / (lb * lb) + 0.5 / (la * la)
}
