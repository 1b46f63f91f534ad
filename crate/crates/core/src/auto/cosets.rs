use super::point::Mat2;
use crate::arith;
use crate::error::{Error, Result};

pub const MAX_INDEX: u64 = 100_000;

/// [SL2(Z) : Gamma_0(q)] = q prod_{p | q} (1 + 1/p).
pub fn gamma0_index(q: u64) -> u64 {
    arith::factorize(q).iter().fold(q, |acc, &(p, _)| acc / p * (p + 1))
}

fn crt(residues: &[(u64, u64)], q: u64) -> u64 {
    let mut x: u64 = 0;
    for &(r, p) in residues {
        let m = q / p;
        let (_, inv, _) = arith::ext_gcd((m % p) as i64, p as i64);
        let inv = inv.rem_euclid(p as i64) as u128;
        x = ((x as u128 + r as u128 * m as u128 % q as u128 * inv) % q as u128) as u64;
    }
    x
}

/// Right coset representatives of Gamma_0(q) in SL2(Z) via the bottom rows P^1(Z/q).
pub fn coset_representatives(q: u64) -> Result<Vec<Mat2>> {
    if q == 0 || !arith::is_squarefree(q) {
        return Err(Error::Domain(format!("q = {q} is not squarefree")));
    }
    let index = gamma0_index(q);
    if index > MAX_INDEX {
        return Err(Error::Refused(format!("index {index} exceeds {MAX_INDEX}")));
    }
    let primes: Vec<u64> = arith::factorize(q).into_iter().map(|(p, _)| p).collect();
    // Points of P^1(F_p): (u : 1) for u in F_p, and (1 : 0).
    let mut rows: Vec<Vec<(u64, u64)>> = vec![vec![]];
    for &p in &primes {
        let mut next = Vec::with_capacity(rows.len() * (p as usize + 1));
        for prefix in &rows {
            for u in 0..=p {
                let pt = if u < p { (u, 1) } else { (1, 0) };
                let mut v = prefix.clone();
                v.push(pt);
                next.push(v);
            }
        }
        rows = next;
    }
    let mut reps = Vec::with_capacity(index as usize);
    for row in rows {
        let cr: Vec<(u64, u64)> = row.iter().zip(&primes).map(|(&(c, _), &p)| (c, p)).collect();
        let dr: Vec<(u64, u64)> = row.iter().zip(&primes).map(|(&(_, d), &p)| (d, p)).collect();
        let (c0, d0) = if q == 1 { (0, 1) } else { (crt(&cr, q) as i64, crt(&dr, q) as i64) };
        reps.push(lift_bottom_row(c0, d0, q as i64));
    }
    reps.sort_by_key(|m| (m.c, m.d));
    Ok(reps)
}

/// SL2(Z) matrix whose bottom row is congruent to (c, d) mod q.
fn lift_bottom_row(c: i64, d: i64, q: i64) -> Mat2 {
    if c == 0 {
        return Mat2::IDENTITY;
    }
    let mut dd = d;
    while arith::gcd_i64(c, dd) != 1 {
        dd += q;
    }
    let (_, s, t) = arith::ext_gcd(dd, c);
    // a dd - b c = 1 with a = s, b = -t.
    Mat2::new(s, -t, c, dd)
}

/// gamma_i gamma_j^{-1} lies in Gamma_0(q) iff the bottom rows are proportional mod q.
pub fn cosets_pairwise_inequivalent(reps: &[Mat2], q: u64) -> bool {
    let q = q as i128;
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            if (a.c as i128 * b.d as i128 - a.d as i128 * b.c as i128).rem_euclid(q) == 0 {
                return false;
            }
        }
    }
    true
}

/// Upper-triangular chart P = sigma gamma = [[A, B], [0, D]], AD = Q, with sigma an
/// Atkin-Lehner element sending the cusp gamma(infinity) to infinity.
pub fn cusp_chart(gamma: &Mat2, q: u64) -> Mat2 {
    let (a, c) = (gamma.a, gamma.c);
    let p = if c == 0 {
        *gamma
    } else {
        let g = arith::gcd_i64(c, q as i64);
        let big_q = q as i64 / g;
        let (_, s, t) = arith::ext_gcd(big_q * a, c);
        let sigma = Mat2::new(big_q * s, t, -c * big_q, a * big_q);
        sigma.mul(gamma)
    };
    debug_assert_eq!(p.c, 0);
    if p.a < 0 {
        Mat2::new(-p.a, -p.b, 0, -p.d)
    } else {
        p
    }
}
