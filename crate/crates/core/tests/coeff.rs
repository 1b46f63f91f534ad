use equi_core::arith;
use equi_core::coeff::*;
use num_bigint::BigInt;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Naive dense multiplication of prod_d prod_n (1 - x^{dn})^{e_d}, e_d >= 0.
fn naive_eta(pattern: &[(usize, u32)], n: usize) -> Vec<i128> {
    let mut c = vec![0i128; n];
    c[0] = 1;
    for &(d, e) in pattern {
        for _ in 0..e {
            let mut m = 1;
            while d * m < n {
                let step = d * m;
                for i in (step..n).rev() {
                    c[i] -= c[i - step];
                }
                m += 1;
            }
        }
    }
    c
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn eta_examples() {
    assert_eq!(eta_product_expansion(&EtaPattern::delta(), 5).unwrap(), ints(&[1, -24, 252, -1472, 4830]));
    assert_eq!(eta_product_expansion(&EtaPattern::f11(), 3).unwrap(), ints(&[1, -2, -1]));
    let p = EtaPattern::new(BTreeMap::from([(2, 5), (3, -1)])).unwrap();
    assert_eq!(eta_product_expansion(&p, 1).unwrap(), ints(&[1]));
    assert!(eta_product_expansion(&EtaPattern::delta(), 0).is_err());
    assert!(EtaPattern::new(BTreeMap::new()).is_err());
}

#[test]
fn eta_matches_dense_multiplication() {
    let n = 400;
    let fast = eta_product_expansion(&EtaPattern::delta(), n as u64).unwrap();
    let slow = naive_eta(&[(1, 24)], n);
    assert_eq!(fast, slow.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
    let fast = eta_product_expansion(&EtaPattern::f11(), n as u64).unwrap();
    let slow = naive_eta(&[(1, 2), (11, 2)], n);
    assert_eq!(fast, slow.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
    let mixed = EtaPattern::new(BTreeMap::from([(1, 4), (2, 4), (3, 7)])).unwrap();
    let fast = eta_product_expansion(&mixed, n as u64).unwrap();
    let slow = naive_eta(&[(1, 4), (2, 4), (3, 7)], n);
    assert_eq!(fast, slow.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
}

#[test]
fn eta_negative_exponents_invert() {
    // eta(z)^{-3} eta(z)^{3} = 1, realized as two separate patterns multiplied.
    let inv = EtaPattern::new(BTreeMap::from([(1, -3)])).unwrap();
    let a = eta_product_expansion(&inv, 60).unwrap();
    let b = eta_product_expansion(&EtaPattern::new(BTreeMap::from([(1, 3)])).unwrap(), 60).unwrap();
    for n in 0..60 {
        let s: BigInt = (0..=n).map(|i| &a[i] * &b[n - i]).sum();
        assert_eq!(s, BigInt::from((n == 0) as i64));
    }
    // 1/prod(1-x^n) generates partitions.
    let part = eta_product_expansion(&EtaPattern::new(BTreeMap::from([(1, -1)])).unwrap(), 11).unwrap();
    assert_eq!(part, ints(&[1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]));
}

#[test]
fn eta_bigint_fallback_on_large_exponents() {
    // prod (1-x^n)^{-240} overflows i128 quickly; check against the i128-free path
    // by comparing with the square of the ^{-120} expansion.
    let big = EtaPattern::new(BTreeMap::from([(1, -240)])).unwrap();
    let half = EtaPattern::new(BTreeMap::from([(1, -120)])).unwrap();
    let a = eta_product_expansion(&big, 40).unwrap();
    let h = eta_product_expansion(&half, 40).unwrap();
    for n in 0..40 {
        let s: BigInt = (0..=n).map(|i| &h[i] * &h[n - i]).sum();
        assert_eq!(a[n], s);
    }
    assert!(a[39] > BigInt::from(i128::MAX));
}

#[test]
fn eta_pattern_metadata() {
    assert_eq!(EtaPattern::f11().level(), 11);
    assert_eq!(EtaPattern::delta().leading_power(), Some(1));
    assert_eq!(EtaPattern::f11().leading_power(), Some(1));
}

#[test]
fn normalization_examples() {
    let d = delta_table(10).unwrap();
    assert_eq!(d.lambda(1), 1.0);
    assert!((d.lambda(2) + 24.0 / 2f64.powf(5.5)).abs() < 1e-15);
    assert!((d.lambda(2) + 0.530330).abs() < 1e-6);
    let f = f11_table(20).unwrap();
    assert!((f.lambda(11) - 1.0 / 11f64.sqrt()).abs() < 1e-15);
    let bad = ints(&[2, 1]);
    assert!(matches!(normalize_coefficients(&bad, NewformDescriptor::delta()), Err(equi_core::Error::NotNormalized(_))));
}

#[test]
fn descriptor_validation() {
    assert!(NewformDescriptor::new(3, 1).is_err());
    assert!(NewformDescriptor::new(2, 12).is_err());
    assert!(NewformDescriptor::new(2, 30).is_ok());
    let mut d = NewformDescriptor::f11();
    d.atkin_lehner.insert(3, 1);
    assert!(d.validate().is_err());
}

fn prime_map(t: &CoefficientTable, n: u64) -> BTreeMap<u64, f64> {
    arith::primes_up_to(n).into_iter().map(|p| (p, t.lambda(p))).collect()
}

#[test]
fn hecke_examples() {
    let d = delta_table(200).unwrap();
    let h = hecke_extend(&prime_map(&d, 200), &d.descriptor, 200).unwrap();
    assert!((h.lambda(4) + 0.71875).abs() < 1e-14);
    assert!((h.lambda(4) + 1472.0 / 4f64.powf(5.5)).abs() < 1e-14);
    assert!((h.lambda(6) - h.lambda(2) * h.lambda(3)).abs() < 1e-15);
    let f = f11_table(200).unwrap();
    let h = hecke_extend(&prime_map(&f, 200), &f.descriptor, 200).unwrap();
    assert!((h.lambda(121) - 1.0 / 11.0).abs() < 1e-15);
    for n in 1..=200 {
        assert!((h.lambda(n) - f.lambda(n)).abs() < 1e-12, "n = {n}");
    }
    let mut missing = prime_map(&f, 200);
    missing.remove(&7);
    assert_eq!(hecke_extend(&missing, &f.descriptor, 200).unwrap_err(), equi_core::Error::IncompleteData(7));
}

#[test]
fn hecke_raw_reproduces_eta() {
    for table in [delta_table(3000).unwrap(), f11_table(3000).unwrap()] {
        let raw = table.raw().unwrap();
        let primes: BTreeMap<u64, BigInt> =
            arith::primes_up_to(3000).into_iter().map(|p| (p, raw[p as usize - 1].clone())).collect();
        let ext = hecke_extend_raw(&primes, &table.descriptor, 3000).unwrap();
        assert_eq!(ext, raw);
    }
}

#[test]
fn tables_satisfy_invariants() {
    delta_table(5000).unwrap().validate().unwrap();
    f11_table(5000).unwrap().validate().unwrap();
    let mut v = f11_table(30).unwrap().lambdas().to_vec();
    v[5] += 1e-6;
    let t = CoefficientTable::from_lambda(NewformDescriptor::f11(), v);
    match t.validate() {
        Err(equi_core::Error::Validation { witness, .. }) => assert_eq!(witness, 6),
        other => panic!("{other:?}"),
    }
}

#[test]
fn satake_examples() {
    let s = satake_from_lambda(0.0, 2).unwrap();
    assert!((s.alpha - Complex64::i()).norm() < 1e-15);
    assert!((s.beta + Complex64::i()).norm() < 1e-15);
    assert!(matches!(satake_from_lambda(2.0, 5), Err(equi_core::Error::DegenerateSatake { .. })));
    assert!(satake_from_lambda(5.0, 2).is_err());
    let d = delta_table(100).unwrap();
    for p in arith::primes_up_to(100) {
        let s = satake_from_lambda(d.lambda(p), p).unwrap();
        assert!((s.alpha.norm() - 1.0).abs() < 1e-12);
        assert!((s.alpha + s.beta - d.lambda(p)).norm() < 1e-12);
        assert!((s.alpha * s.beta - 1.0).norm() < 1e-12);
    }
    // Real roots for 2 < |lambda| < sqrt(p) + 1/sqrt(p).
    let s = satake_from_lambda(2.5, 5).unwrap();
    assert!((s.alpha * s.beta - 1.0).norm() < 1e-15 && (s.alpha + s.beta - 2.5).norm() < 1e-15);
}

#[test]
fn adjoint_l_examples() {
    let f = f11_table(100).unwrap();
    let a10 = adjoint_l_at_1(&f, 10).unwrap().value;
    let a11 = adjoint_l_at_1(&f, 11).unwrap().value;
    assert!((a11 / a10 - 121.0 / 120.0).abs() < 1e-15);
    let empty = adjoint_l_at_1(&f, 1).unwrap();
    assert_eq!(empty.value, 1.0);
    assert!(empty.tail_bound.is_infinite());
    assert!(adjoint_l_at_1(&f, 101).is_err());
}

#[test]
fn adjoint_l_stabilizes_within_tail_bound() {
    let d = delta_table(100_000).unwrap();
    let a1 = adjoint_l_at_1(&d, 1000).unwrap();
    let a2 = adjoint_l_at_1(&d, 10_000).unwrap();
    let a3 = adjoint_l_at_1(&d, 100_000).unwrap();
    assert!((a2.value - a1.value).abs() <= a1.tail_bound);
    assert!((a3.value - a2.value).abs() <= a2.tail_bound);
    assert!(a3.tail_bound.is_finite() && a3.horizon == 1e10);
}

#[test]
fn adjoint_l_from_satake_agrees() {
    let d = delta_table(500).unwrap();
    let sat = arith::primes_up_to(500).into_iter().map(|p| (p, satake_from_lambda(d.lambda(p), p).unwrap())).collect();
    let a = adjoint_l_from_satake(1, &sat, 500).unwrap();
    assert!((a.value - adjoint_l_at_1(&d, 500).unwrap().value).abs() < 1e-15);
}

#[test]
fn ingest_round_trip_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("delta.csv");
    let d = delta_table(500).unwrap();
    export_coefficients(&d, &path).unwrap();
    let (desc, back) = ingest_coefficients(&path, CoefficientFormat::Csv).unwrap();
    assert_eq!(desc, d.descriptor);
    assert_eq!(back, d);

    let path = dir.path().join("f11.csv");
    let f = f11_table(300).unwrap();
    export_coefficients(&f, &path).unwrap();
    let (desc, back) = ingest_coefficients(&path, CoefficientFormat::Csv).unwrap();
    assert_eq!(desc.level, 11);
    assert!((back.lambda(11).powi(2) - 1.0 / 11.0).abs() < 1e-12);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "n,a_n\n1,2\n2,-24\n").unwrap();
    std::fs::write(dir.path().join("bad.meta.json"), r#"{"level": 1, "weight": 12}"#).unwrap();
    let err = ingest_coefficients(&bad, CoefficientFormat::Csv).unwrap_err();
    assert!(err.to_string().contains("λ(1) = 1 violated"), "{err}");

    std::fs::write(&bad, "n,a_n\n1,1\n2,x\n").unwrap();
    assert_eq!(
        ingest_coefficients(&bad, CoefficientFormat::Csv).unwrap_err(),
        equi_core::Error::Parse { line: 3, msg: "bad value \"x\"".into() }
    );
    std::fs::write(&bad, "n,a_n\n1,1\n3,-24\n").unwrap();
    assert!(matches!(ingest_coefficients(&bad, CoefficientFormat::Csv), Err(equi_core::Error::Parse { line: 3, .. })));

    // f11 data declared at level 1 passes lambda checks except nothing at p | q;
    // declared at level 11 with a tampered a(11) fails the level invariant.
    let tampered = dir.path().join("t.csv");
    let mut s = String::from("n,a_n\n");
    for (i, a) in f.raw().unwrap().iter().enumerate().take(12) {
        let a = if i == 10 { BigInt::from(2) } else { a.clone() };
        s.push_str(&format!("{},{}\n", i + 1, a));
    }
    std::fs::write(&tampered, s).unwrap();
    std::fs::write(dir.path().join("t.meta.json"), r#"{"level": 11, "weight": 2, "atkin_lehner": {"11": -1}}"#).unwrap();
    match ingest_coefficients(&tampered, CoefficientFormat::Csv) {
        Err(equi_core::Error::Validation { witness, .. }) => assert_eq!(witness, 11),
        other => panic!("{other:?}"),
    }
}

#[test]
fn extended_precision_normalization() {
    let f = f11_table(200).unwrap();
    let e = normalize_extended(f.raw().unwrap(), 2, 256).unwrap();
    assert!(e.level_residual(11) < 1e-70);
    let d = delta_table(50).unwrap();
    let e = normalize_extended(d.raw().unwrap(), 12, 128).unwrap();
    for n in 1..=50 {
        let v = equi_core::ext::ext_to_f64(e.lambda(n));
        assert!((v - d.lambda(n)).abs() <= 1e-14 * d.lambda(n).abs().max(1.0));
    }
}
