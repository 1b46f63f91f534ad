use equi_core::arith;
use equi_core::coeff::*;
use equi_core::shift::*;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn constant_table(n: u64) -> CoefficientTable {
    CoefficientTable::from_lambda(NewformDescriptor::delta(), vec![1.0; n as usize])
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn shifted_sum_constant_table() {
    let t = constant_table(20);
    assert_eq!(shifted_sum_exact(&t, 1, 5.0).unwrap().value, 4.0);
    assert_eq!(shifted_sum_exact(&t, 2, 10.0).unwrap().value, 8.0);
    assert!(shifted_sum_exact(&t, 0, 10.0).is_err());
    let empty = shifted_sum_exact(&t, 11, 10.0).unwrap();
    assert!(empty.empty && empty.value == 0.0);
}

#[test]
fn shifted_sum_reversed_order_and_symmetry() {
    let t = delta_table(200).unwrap();
    let direct = shifted_sum_exact(&t, 1, 100.0).unwrap().value;
    let mut rev = 0.0;
    for n in (1..=99u64).rev() {
        rev += (t.lambda(n + 1) * t.lambda(n)).abs();
    }
    assert!((direct - rev).abs() <= 1e-12 * direct);
    for l in 1..=10 {
        let a = shifted_sum_exact(&t, l, 100.0).unwrap().value;
        let b = shifted_sum_exact(&t, -l, 100.0).unwrap().value;
        assert!((a - b).abs() <= 1e-12 * a, "l = {l}");
    }
}

#[test]
fn shifted_sum_bound_trivial_cases() {
    let zero = CoefficientTable::from_lambda(
        NewformDescriptor::delta(),
        (1..=100).map(|n| if n == 1 { 1.0 } else { 0.0 }).collect(),
    );
    let x: f64 = 50.0;
    let expect = x / (1.0 + x.ln()).powf(1.8);
    assert!((shifted_sum_bound(&zero, x, 0.2).unwrap() - expect).abs() < 1e-12 * expect);
    assert!((shifted_sum_bound(&zero, 1.0, 0.2).unwrap() - 1.0).abs() < 1e-15);
    let d = delta_table(10_000).unwrap();
    let mut prev = 0.0;
    for x in [10.0, 100.0, 1000.0, 10_000.0] {
        let b = shifted_sum_bound(&d, x, 0.2).unwrap();
        assert!(b.is_finite() && b > prev);
        prev = b;
    }
}

#[test]
fn z_part_examples() {
    assert_eq!(z_part_triple(12, 4, 3.0).unwrap(), SieveTriple { a: 4, b: 3, c: 4 });
    assert_eq!(z_part_triple(1, 1, 2.0).unwrap(), SieveTriple { a: 2, b: 1, c: 1 });
    assert_eq!(z_part_triple(3, 4, 2.0).unwrap(), SieveTriple { a: 1, b: 1, c: 1 });
    assert_eq!(z_part(16, 3.0), 16);
    assert_eq!(z_part(2 * 3 * 5 * 7 * 7, 5.0), 30);
    assert_eq!(z_part(97, 100.0), 97);
}

#[test]
fn z_part_triples_satisfy_constraints() {
    for l in [1i64, 2, 6, 12, -4] {
        for z in [2.0, 3.0, 10.0] {
            for n in 1..500u64 {
                if n as i64 + l < 1 {
                    continue;
                }
                let t = z_part_triple(n, l, z).unwrap();
                assert!(t.satisfies_constraints(l, z), "n = {n}, l = {l}, z = {z}");
                let m = (n as i64 + l) as u64;
                assert_eq!(t.a * t.c, z_part(m, z));
                assert_eq!(t.b * t.c, z_part(n, z));
            }
        }
    }
}

#[test]
fn sieve_fibers_partition() {
    for (l, z, x) in [(1i64, 2.0, 100.0), (6, 10.0, 2000.0), (12, 5.0, 1000.0)] {
        let fibers = sieve_fibers(l, z, x);
        let mut total = 0;
        for (&t, &n) in &fibers {
            let (count, rhs) = sieve_class_count(t, l, z, x).unwrap();
            assert_eq!(count, n);
            assert!(count <= x as u64 && rhs > 0.0);
            total += count;
        }
        assert_eq!(total, x as u64);
    }
    // (1,1,1) with l odd and z = 2: both n and n + l odd, which is impossible.
    let (count, _) = sieve_class_count(SieveTriple { a: 1, b: 1, c: 1 }, 3, 2.0, 100.0).unwrap();
    let oracle = (1..=100u64).filter(|n| n % 2 == 1 && (n + 3) % 2 == 1).count() as u64;
    assert_eq!(count, oracle);
    assert!(sieve_class_count(SieveTriple { a: 1, b: 1, c: 4 }, 6, 3.0, 100.0).is_err());
}

#[test]
fn sieve_ratio_grid_is_finite() {
    for l in 1..=20i64 {
        for (t, _) in sieve_fibers(l, 10.0, 100_000.0).into_iter().take(5) {
            let (count, rhs) = sieve_class_count(t, l, 10.0, 100_000.0).unwrap();
            assert!((count as f64 / rhs).is_finite());
        }
    }
}

#[test]
fn psi_values() {
    assert_eq!(psi_function(1), rat(1, 1));
    assert_eq!(psi_function(2), rat(20, 1));
    assert_eq!(psi_function(3), rat(27, 2));
    assert_eq!(psi_function(6), psi_function(2) * psi_function(3));
}

#[test]
fn psi_definition_matches_closed_form() {
    for l in 1..=10_000u64 {
        assert_eq!(psi_function(l), psi_closed_form(l), "l = {l}");
    }
}

#[test]
fn psi_printed_prime_power_differs_for_squares() {
    assert_eq!(psi_prime_power_as_printed(2, 1), psi_prime_power(2, 1));
    assert_eq!(psi_prime_power(2, 2), rat(233, 4));
    assert_eq!(psi_prime_power_as_printed(2, 2), rat(125, 4));
    assert_eq!(psi_function(4), rat(233, 4));
}

#[test]
fn psi_prime_power_bound() {
    for p in arith::primes_up_to(100) {
        for a in 1..=10 {
            let bound = rat(1, 1) + rat(1_000_000, p as i64);
            assert!(psi_prime_power(p, a) <= bound, "p = {p}, a = {a}");
        }
    }
}

#[test]
fn mellin_normalization_and_decay() {
    let h = BumpFunction::standard();
    let m1 = h.mellin(Complex64::new(1.0, 0.0)).unwrap();
    assert!((m1.re - PI / 3.0).abs() < 1e-10 && m1.im.abs() < 1e-14);
    for sigma in [-1.0, 0.0, 0.5, 2.0, 3.0] {
        assert!(h.mellin(Complex64::new(sigma, 0.0)).unwrap().re > 0.0);
    }
    let (y0, y1) = h.support();
    assert!(h.eval(y0 * 0.999) == 0.0 && h.eval(y1 * 1.001) == 0.0 && h.eval(1.0) > 0.0);
    // The transform oscillates in t, so compare window maxima of |h^(sigma+it)| (1+t)^3.
    for sigma in [0.0, 1.0, 2.0] {
        let window_max = |t0: f64| {
            (0..=64)
                .map(|i| {
                    let t = t0 * (1.0 + i as f64 / 64.0);
                    h.mellin(Complex64::new(sigma, t)).unwrap().norm() * (1.0 + t).powi(3)
                })
                .fold(0.0, f64::max)
        };
        let scaled: Vec<f64> = [20.0, 40.0, 80.0, 160.0].iter().map(|&t| window_max(t)).collect();
        for w in scaled.windows(2) {
            assert!(w[1] < w[0], "sigma = {sigma}: {scaled:?}");
        }
    }
}

#[test]
fn shift_integral_basics() {
    let h = BumpFunction::standard();
    let q = WeightedQuery::new(Complex64::new(0.0, 0.0), 2, 5.0, 12).unwrap();
    let (v, b) = shift_integral_is(&q, 3, &h, 3).unwrap();
    assert!(v > 0.0 && b > 0.0);
    assert!(WeightedQuery::new(Complex64::new(0.0, 0.0), 1, 5.0, 1).is_err());
    assert!(WeightedQuery::new(Complex64::new(0.6, 0.0), 1, 5.0, 12).is_err());
    assert!(WeightedQuery::new(Complex64::new(0.0, 0.0), 0, 5.0, 12).is_err());
    assert!(shift_integral_is(&WeightedQuery { l: -5, ..q }, 3, &h, 3).is_err());
}

#[test]
fn shift_integral_lemma_constant() {
    let h = BumpFunction::standard();
    let mut worst: f64 = 0.0;
    for k in [2u32, 12, 24] {
        for x in [1.0, 10.0, 100.0] {
            for l in [1i64, 3, 10] {
                for s in [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.2), Complex64::new(0.3, 0.0)] {
                    let q = WeightedQuery::new(s, l, x, k).unwrap();
                    for n in [1u64, 5, 20, 100, 500] {
                        let (v, b) = shift_integral_is(&q, n, &h, 3).unwrap();
                        worst = worst.max(v.abs() / b);
                    }
                }
            }
        }
    }
    eprintln!("lemma worst {worst}");
    assert!(worst.is_finite() && worst <= LEMMA_CONSTANT_MAX, "worst = {worst}");
}

fn oracle_k0(x: f64) -> f64 {
    // K_0(x) = int_0^inf exp(-x cosh t) dt on a fixed composite Simpson grid.
    let tmax = (60.0 / x).acosh().max(1.0) + 1.0;
    let n = 20_000;
    let hstep = tmax / n as f64;
    let f = |t: f64| (-x * t.cosh()).exp();
    let mut s = f(0.0) + f(tmax);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * hstep);
    }
    s * hstep / 3.0
}

#[test]
fn weighted_sum_term_by_term_oracle() {
    let t = delta_table(400).unwrap();
    let h = BumpFunction::standard();
    let q = WeightedQuery::new(Complex64::new(0.0, 0.0), 1, 10.0, 12).unwrap();
    let got = weighted_shifted_sum(&t, &q, &h).unwrap();

    let (y0, y1) = h.support();
    let (a, b) = (y0 / 10.0, y1 / 10.0);
    let panels = 400;
    let width = (b - a) / panels as f64;
    // 3-point Gauss per panel; K_0 is evaluated once per node.
    let mut nodes = Vec::new();
    for i in 0..panels {
        let mid = a + (i as f64 + 0.5) * width;
        for (u, w) in [(-0.774596669241483, 5.0 / 9.0), (0.0, 8.0 / 9.0), (0.774596669241483, 5.0 / 9.0)] {
            let y: f64 = mid + 0.5 * width * u;
            let ks = 2.0 * y.sqrt() * oracle_k0(2.0 * PI * y);
            nodes.push((y, 0.5 * width * w * h.eval(10.0 * y) * ks / (y * y)));
        }
    }
    let kf = |z: f64| z.powf(6.0) * (-2.0 * PI * z).exp();
    let mut oracle = 0.0;
    for n in 1..=300u64 {
        let m = n + 1;
        let (mf, nf) = (m as f64, n as f64);
        let integral: f64 = nodes.iter().map(|&(y, w)| w * kf(mf * y) * kf(nf * y)).sum();
        oracle += t.lambda(m) * t.lambda(n) / (mf * nf).sqrt() * integral;
    }
    assert!((got.value - oracle).abs() <= 1e-9 * oracle.abs(), "got {} oracle {oracle}", got.value);
}

#[test]
fn weighted_sum_sparse_table() {
    let mut lam = vec![0.0; 2000];
    lam[0] = 1.0;
    let t = CoefficientTable::from_lambda(NewformDescriptor::delta(), lam);
    let h = BumpFunction::standard();
    let q = WeightedQuery::new(Complex64::new(0.0, 0.0), -1, 3.0, 12).unwrap();
    let got = weighted_shifted_sum(&t, &q, &h).unwrap();
    // Only n = 2 (m = 1) survives, with lambda(2) = 0, so the sum vanishes.
    assert_eq!(got.value, 0.0);
    let mut lam = vec![0.0; 2000];
    lam[0] = 1.0;
    lam[1] = 0.5;
    let t = CoefficientTable::from_lambda(NewformDescriptor::delta(), lam);
    let q = WeightedQuery::new(Complex64::new(0.0, 0.0), 1, 3.0, 12).unwrap();
    let got = weighted_shifted_sum(&t, &q, &h).unwrap();
    let single = 0.5 / 2f64.sqrt() * shift_integral_is(&q, 1, &h, 3).unwrap().0;
    assert!((got.value - single).abs() <= 1e-15 * single.abs());
}

#[test]
fn weighted_sum_insufficient_range_names_requirement() {
    let t = delta_table(20).unwrap();
    let h = BumpFunction::standard();
    let q = WeightedQuery::new(Complex64::new(0.0, 0.0), 1, 10.0, 12).unwrap();
    match weighted_shifted_sum(&t, &q, &h) {
        Err(equi_core::Error::InsufficientRange { required, available }) => {
            assert!(required > 20 && available == 20);
            let t2 = delta_table(required).unwrap();
            assert!(weighted_shifted_sum(&t2, &q, &h).is_ok());
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn weighted_sum_corollary_ratio_grid() {
    let t = delta_table(40_000).unwrap();
    let h = BumpFunction::standard();
    let mut worst: f64 = 0.0;
    for s in [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.2)] {
        for l in [1i64, 5, 10] {
            for x in [10.0, 100.0, 1000.0] {
                let q = WeightedQuery::new(s, l, x, 12).unwrap();
                let v = weighted_shifted_sum(&t, &q, &h).unwrap().value;
                let rhs = corollary_bound(&t, x, 12, 0.2).unwrap();
                worst = worst.max(v.abs() / rhs);
            }
        }
    }
    eprintln!("weighted worst {worst}");
    assert!(worst.is_finite() && worst <= WEIGHTED_RATIO_MAX, "worst = {worst}");
}

#[test]
fn divisor_weighted_sum_additivity() {
    let t = delta_table(40_000).unwrap();
    let h = BumpFunction::standard();
    let base = WeightedQuery::new(Complex64::new(0.0, 0.0), 1, 1.0, 12).unwrap();
    let (one, _) = divisor_weighted_sum(&t, 1, &base, 20.0, &h).unwrap();
    let direct = weighted_shifted_sum(&t, &WeightedQuery { x: 20.0, ..base }, &h).unwrap().value;
    assert_eq!(one, direct);
    let (total, parts) = divisor_weighted_sum(&t, 6, &base, 20.0, &h).unwrap();
    assert_eq!(parts.iter().map(|p| p.0).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
    let mut sum = 0.0;
    for &(d, v) in &parts {
        let q = WeightedQuery { l: d as i64, x: 20.0 * d as f64, ..base };
        let indep = weighted_shifted_sum(&t, &q, &h).unwrap().value;
        assert!((indep - v).abs() <= 1e-12 * indep.abs());
        sum += indep;
    }
    assert!((total - sum).abs() <= 1e-12 * sum.abs());
    let rhs = sums_of_sums_bound(&t, 6, 12, 20.0, 0.2).unwrap();
    assert!((total.abs() / rhs).is_finite());
}

#[test]
fn divisor_lemma_examples() {
    let r = divisor_lemma_ratio(7, 12, 0.5).unwrap();
    let expect = 1.0 / 12f64.ln().powf(1.5) + 7.0 / 84f64.ln().powf(1.5);
    assert!((r.lhs - expect).abs() < 1e-14 * expect);
    let r = divisor_lemma_ratio(6, 2, 0.5).unwrap();
    let expect: f64 = [1.0f64, 2.0, 3.0, 6.0].iter().map(|&d| d / (2.0 * d).ln().powf(1.5)).sum();
    assert!((r.lhs - expect).abs() < 1e-14 * expect);
    assert!(divisor_lemma_ratio(12, 2, 0.5).is_err());
    assert!(divisor_lemma_ratio(6, 3, 0.5).is_err());
}

#[test]
fn divisor_lemma_ratio_random_squarefree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let primes = arith::primes_up_to(10_000);
    let mut worst: f64 = 0.0;
    let mut seen = 0;
    while seen < 200 {
        let omega = rng.gen_range(1..=12);
        let mut q: u64 = 1;
        let mut ok = true;
        let mut used = Vec::new();
        for _ in 0..omega {
            let p = primes[rng.gen_range(0..primes.len())];
            if used.contains(&p) || q.saturating_mul(p) > 1_000_000_000_000 {
                ok = false;
                break;
            }
            used.push(p);
            q *= p;
        }
        if !ok {
            continue;
        }
        seen += 1;
        for k in [2, 12] {
            for eps in [0.1, 0.5] {
                worst = worst.max(divisor_lemma_ratio(q, k, eps).unwrap().ratio);
            }
        }
    }
    eprintln!("divisor worst {worst}");
    assert!(worst.is_finite() && worst <= DIVISOR_RATIO_MAX, "worst = {worst}");
}

#[test]
fn shifted_sum_calibration_grid() {
    let d = delta_table(100_010).unwrap();
    let f = f11_table(100_010).unwrap();
    let mut worst: f64 = 0.0;
    for t in [&d, &f] {
        for l in 1..=10 {
            for x in [1e3, 1e4, 1e5] {
                let lhs = shifted_sum_exact(t, l, x).unwrap().value;
                worst = worst.max(lhs / shifted_sum_bound(t, x, 0.2).unwrap());
            }
        }
    }
    assert!(worst <= SHIFTED_SUM_RATIO_MAX, "worst = {worst}");
    eprintln!("shifted-sum worst ratio {worst}");
}

#[test]
fn quality_factor() {
    let d = delta_table(10_000).unwrap();
    let adj = adjoint_l_at_1(&d, 10_000).unwrap();
    let q1 = mf_quality(&d, &adj, 1.0).unwrap();
    assert!((q1.value - 1.0 / adj.value).abs() < 1e-15);
    let q = mf_quality(&d, &adj, 10_000.0).unwrap();
    assert!(q.value > 0.0 && q.lower <= q.value && q.value <= q.upper);
    let mut prev = 0.0;
    for x in [2.0, 10.0, 100.0, 1000.0] {
        let num = mf_quality(&d, &adj, x).unwrap().value * (1.0 + f64::ln(x)).powi(2) * adj.value;
        assert!(num >= prev);
        prev = num;
    }
}

#[test]
fn divisor_lemma_ratio_sweep_small_q() {
    let mut worst = (0.0f64, 0u64);
    for q in (1..=20_000u64).filter(|&q| arith::is_squarefree(q)) {
        for k in [2, 12] {
            for eps in [0.1, 0.5] {
                let r = divisor_lemma_ratio(q, k, eps).unwrap().ratio;
                if r > worst.0 {
                    worst = (r, q);
                }
            }
        }
    }
    // independent Python evaluation: q = 6, k = 2, eps = 0.1
    assert_eq!(worst.1, 6);
    assert!((worst.0 - 3.204044759887263).abs() < 1e-12, "{worst:?}");
    assert!(worst.0 <= DIVISOR_RATIO_MAX);
}
