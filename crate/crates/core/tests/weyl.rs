use equi_core::coeff::SatakeLocalData;
use equi_core::weyl::*;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn enumeration_examples() {
    let e0 = enumerate_weyl(0);
    assert_eq!(e0.iter().map(|&(_, mu, lam)| (mu, lam)).collect::<Vec<_>>(), vec![(0, 0), (1, 0)]);
    let mut e1: Vec<(u32, u32)> = enumerate_weyl(1).iter().map(|&(_, mu, lam)| (mu, lam)).collect();
    e1.sort();
    assert_eq!(e1, vec![(0, 0), (0, 1), (1, 0), (1, 1), (1, 1), (2, 1)]);
    for l in 1..40 {
        assert_eq!(enumerate_weyl(l).len() as u32, 2 + 4 * l);
    }
}

#[test]
fn enumeration_is_canonical_sorted_and_unique() {
    let e = enumerate_weyl(12);
    for w in e.windows(2) {
        assert!(w[0].0 < w[1].0);
    }
    for (w, mu, lam) in &e {
        assert!(!(w.family == Family::V && w.b == 0 && w.n == 0));
        assert_eq!((*mu, *lam), (w.mu(), w.lam()));
    }
    assert!(WeylElement::new(Family::V, 1, 0, 0).is_none());
}

/// Independent oracle: expand (1+x)(1+t)/(1-xt) by multiplying out
/// (1 + x + t + xt) * sum (xt)^k on a dense grid.
fn product_oracle(n: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n + 1]; n + 1];
    let num = [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)];
    for k in 0..=n {
        for &(i, j, c) in &num {
            if i + k <= n && j + k <= n {
                g[i + k][j + k] += c;
            }
        }
    }
    g
}

#[test]
fn generating_function_identity() {
    let (s, res, spec) = weyl_generating_function(50);
    assert!(res.is_zero());
    assert!(spec.is_zero());
    assert_eq!(*s.coeff(0, 0), BigRational::one());
    assert_eq!(*s.coeff(1, 1), r(2, 1));
    let oracle = product_oracle(50);
    for i in 0..=50 {
        for j in 0..=(50 - i) {
            assert_eq!(*s.coeff(i, j), r(oracle[i][j], 1), "({i},{j})");
        }
    }
}

#[test]
fn macdonald_examples() {
    let s = SatakeLocalData::unit_circle(2, std::f64::consts::FRAC_PI_2);
    assert!((macdonald_coefficient(&s, 0).unwrap() - 1.0).norm() < 1e-15);
    assert!(macdonald_coefficient(&s, 1).unwrap().norm() < 1e-15);
    // p = 3, alpha + beta = 1: alpha = e^{i pi/3}.
    let s = SatakeLocalData::unit_circle(3, std::f64::consts::FRAC_PI_3);
    let want = 0.75 / 3f64.sqrt();
    assert!((macdonald_coefficient(&s, 1).unwrap() - want).norm() < 1e-15);
    let deg = SatakeLocalData { p: 5, alpha: Complex64::new(1.0, 0.0), beta: Complex64::new(1.0, 0.0) };
    assert!(macdonald_coefficient(&deg, 3).is_err());
    assert!(ip_brute_force(&deg, 10).is_err());
    // The closed form still evaluates at the degenerate point.
    assert!(ip_closed_form(&deg).is_ok());
}

#[test]
fn macdonald_exact_matches_float() {
    let s = SatakeLocalData::exact_rational(5, 2, 1).unwrap();
    let f = SatakeLocalData { p: 5, alpha: Complex64::new(2.0, 0.0), beta: Complex64::new(0.5, 0.0) };
    for m in 0..12 {
        let e = macdonald_coefficient(&s, m).unwrap().to_f64();
        let v = macdonald_coefficient(&f, m).unwrap();
        assert!((e - v.re).abs() < 1e-13 && v.im.abs() < 1e-15, "m = {m}");
    }
}

#[test]
fn ip_spot_value_and_tail() {
    let s = SatakeLocalData::unit_circle(2, std::f64::consts::FRAC_PI_2);
    let (v, tail) = ip_brute_force(&s, 60).unwrap();
    assert!((v - 1.0 / 3.0).norm() < 1e-10);
    assert!((ip_closed_form(&s).unwrap() - 1.0 / 3.0).norm() < 1e-15);
    assert!(tail < 1e-12);
    let tails: Vec<f64> = (2..20).map(|l| ip_brute_force(&s, l).unwrap().1).collect();
    for w in tails.windows(2) {
        assert!(w[1] < w[0]);
    }
    assert!(ip_brute_force(&s, 1).is_err());
}

#[test]
fn brute_force_within_tail_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [2u64, 3, 5, 7, 11] {
        for _ in 0..100 {
            let s = SatakeLocalData::unit_circle(p, rng.gen_range(0.01..std::f64::consts::PI - 0.01));
            for lam in [4u32, 10, 60] {
                let (v, tail) = ip_brute_force(&s, lam).unwrap();
                let c = ip_closed_form(&s).unwrap();
                assert!((v - c).norm() <= tail, "p {p} lam {lam}");
            }
        }
    }
}

#[test]
fn tilde_ip_examples() {
    let s = SatakeLocalData::unit_circle(2, std::f64::consts::FRAC_PI_2);
    assert!((tilde_ip(&s, IpSource::ClosedForm).unwrap() - 0.5).norm() < 1e-15);
    let s = SatakeLocalData::unit_circle(3, 0.77);
    assert!((tilde_ip(&s, IpSource::BruteForce { lam_max: 60 }).unwrap() - 1.0 / 3.0).norm() < 1e-10);
    let e = SatakeLocalData::exact_rational(5, 2, 1).unwrap();
    let t = tilde_ip(&e, IpSource::ClosedForm).unwrap();
    assert_eq!((t.u, t.v), (r(1, 5), BigRational::zero()));
    let t = tilde_ip(&e, IpSource::BruteForce { lam_max: 30 }).unwrap();
    assert!((t.to_f64() - 0.2).abs() < 1e-12);
}

#[test]
fn tilde_ip_exact_rational_family() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        for (n, d) in [(5, 4), (4, 5), (-5, 4), (3, 2), (-1, 3)] {
            let Ok(s) = SatakeLocalData::exact_rational(p, n, d) else { continue };
            let t = tilde_ip(&s, IpSource::ClosedForm).unwrap();
            assert_eq!((t.u, t.v), (r(1, p as i64), BigRational::zero()), "p {p} alpha {n}/{d}");
        }
    }
    // alpha in Q(sqrt p) with an irrational part.
    let a = QuadExt::new(7, r(1, 2), r(1, 3));
    let s = SatakeLocalData::exact(7, a).unwrap();
    let t = tilde_ip(&s, IpSource::ClosedForm).unwrap();
    assert_eq!((t.u, t.v), (r(1, 7), BigRational::zero()));
    // |alpha| >= sqrt(p) is rejected exactly.
    assert!(SatakeLocalData::exact_rational(2, 3, 2).is_err());
    assert!(SatakeLocalData::exact_rational(4, 1, 1).is_err());
}

#[test]
fn tilde_ip_extended_precision() {
    let s = SatakeLocalData::extended_unit_circle(5, 1.1, 200);
    let t = tilde_ip(&s, IpSource::BruteForce { lam_max: 60 }).unwrap();
    let (re, im) = t.to_f64_pair();
    assert!((re - 0.2).abs() < 1e-14 && im.abs() < 1e-14);
}

#[test]
fn pole_is_reported() {
    // alpha = p^{1/2} makes L_p(1/2) infinite; built without the validity check.
    let s = SatakeLocalData { p: 4, alpha: Complex64::new(2.0, 0.0), beta: Complex64::new(0.5, 0.0) };
    assert!(matches!(tilde_ip(&s, IpSource::ClosedForm), Err(equi_core::Error::Pole(_))));
}

#[test]
fn watson_factors() {
    assert_eq!(watson_local_factor(7, SplitCase::None, None).unwrap(), BigRational::one());
    assert_eq!(watson_local_factor(7, SplitCase::Two, None).unwrap(), r(1, 7));
    assert_eq!(watson_local_factor(2, SplitCase::Three, Some(-1)).unwrap(), BigRational::zero());
    assert_eq!(watson_local_factor(2, SplitCase::Three, Some(1)).unwrap(), r(3, 2));
    assert!(watson_local_factor(2, SplitCase::Two, Some(1)).is_err());
    assert!(watson_local_factor(2, SplitCase::Three, None).is_err());
}

#[test]
fn watson_finite_part_examples() {
    let sat = |q: u64| -> BTreeMap<u64, SatakeLocalData<QuadExt>> {
        equi_core::arith::factorize(q)
            .into_iter()
            .map(|(p, _)| (p, SatakeLocalData::exact_rational(p, 5, 4).unwrap()))
            .collect()
    };
    let w = watson_finite_part(1, &sat(1)).unwrap();
    assert_eq!((w.product, w.constant), (BigRational::one(), r(1, 8)));
    let w = watson_finite_part(6, &sat(6)).unwrap();
    assert_eq!((w.product, w.constant), (r(1, 6), r(1, 48)));
    for q in [30u64, 210] {
        assert_eq!(watson_finite_part(q, &sat(q)).unwrap().product, r(1, q as i64));
    }
    assert!(watson_finite_part(12, &sat(6)).is_err());
}

#[test]
fn quad_ext_arithmetic() {
    let a = QuadExt::new(3, r(2, 1), r(1, 1));
    let b = a.inverse().unwrap();
    assert_eq!(a.clone() * b, QuadExt::from_ratio(3, 1, 1));
    assert_eq!(a.norm(), r(1, 1));
    assert!(QuadExt::new(3, r(-2, 1), r(1, 1)).signum().is_lt());
    assert!(QuadExt::new(3, r(-1, 1), r(1, 1)).signum().is_gt());
    assert!(QuadExt::from_ratio(3, 0, 1).inverse().is_err());
}

proptest! {
    #[test]
    fn tilde_ip_is_one_over_p(theta in 0.01f64..3.13, pi in 0usize..5) {
        let p = [2u64, 3, 5, 7, 11][pi];
        let s = SatakeLocalData::unit_circle(p, theta);
        let t = tilde_ip(&s, IpSource::ClosedForm).unwrap();
        prop_assert!((t - 1.0 / p as f64).norm() < 1e-12);
    }

    #[test]
    fn macdonald_decay_bound(theta in 0.05f64..3.09, m in 0u32..40) {
        let p = 3u64;
        let s = SatakeLocalData::unit_circle(p, theta);
        let v = macdonald_coefficient(&s, m).unwrap().norm();
        // |Phi(m)| <= (m+1) p^{-m/2} * C with C = (1+1/p)^{-1}(1+1/p).
        prop_assert!(v <= (m as f64 + 1.0) * (p as f64).powf(-(m as f64) / 2.0) + 1e-12);
    }

    #[test]
    fn real_satake_pairs(alpha in 1.05f64..1.4, pi in 0usize..4) {
        let p = [2u64, 3, 5, 7][pi];
        let s = SatakeLocalData::new(p, Complex64::new(alpha, 0.0), Complex64::new(1.0 / alpha, 0.0)).unwrap();
        let (v, tail) = ip_brute_force(&s, 60).unwrap();
        prop_assert!((v - ip_closed_form(&s).unwrap()).norm() <= tail);
    }
}

