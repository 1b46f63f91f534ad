//! The acceptance criteria behind `report-all`.

use crate::commands::{
    hecke_matches_eta, psi_checks, random_squarefree, sieve_partition_checks, CliResult, Outcome, RANKIN_SELBERG_TOL,
    RESIDUE_TOL, TILDE_IP_TOL, UNFOLDING_TOL,
};
use crate::report::{num, Check, Status};
use equi_core::arith;
use equi_core::auto::*;
use equi_core::coeff::*;
use equi_core::shift::*;
use equi_core::weyl::*;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

const SATAKE_SEED: u64 = 0x5a7a_6e;
const DIVISOR_SEED: u64 = 0xd1_7150;
const SMALL_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    /// Wall-clock budget in seconds, where one is stated.
    pub budget_s: Option<f64>,
    pub run: fn() -> CliResult<Vec<Check>>,
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, title: "tilde_ip = 1/p", budget_s: Some(5.0), run: c01_tilde_ip },
        Criterion { id: 2, title: "Weyl-group Poincare series", budget_s: Some(1.0), run: c02_poincare },
        Criterion { id: 3, title: "closed-form vs truncated I_p", budget_s: None, run: c03_closed_vs_truncated },
        Criterion { id: 4, title: "finite part prod tilde_ip = 1/q", budget_s: Some(1.0), run: c04_finite_part },
        Criterion { id: 5, title: "Hecke and eta-product consistency", budget_s: Some(10.0), run: c05_hecke_eta },
        Criterion { id: 6, title: "Petersson norm vs adjoint L-value", budget_s: Some(240.0), run: c06_rankin_selberg },
        Criterion { id: 7, title: "unfolding identity", budget_s: Some(120.0), run: c07_unfolding },
        Criterion { id: 8, title: "Eisenstein residue 3/pi", budget_s: None, run: c08_residue },
        Criterion { id: 9, title: "psi audits", budget_s: None, run: c09_psi },
        Criterion { id: 10, title: "sieve partition", budget_s: None, run: c10_sieve },
        Criterion { id: 11, title: "shifted-sum bound calibration", budget_s: Some(60.0), run: c11_shifted_sum },
        Criterion { id: 12, title: "divisor lemma calibration", budget_s: Some(10.0), run: c12_divisor },
        Criterion { id: 13, title: "I_s bound constant", budget_s: None, run: c13_is_bound },
    ]
}

pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub budget_s: Option<f64>,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Runs criteria on the current rayon pool; output order follows the input.
pub fn run_criteria(list: &[Criterion]) -> Vec<CriterionOutcome> {
    list.par_iter()
        .map(|c| {
            let start = Instant::now();
            let checks = match (c.run)() {
                Ok(v) => v,
                Err(e) => vec![Check::judged("error", c.title, false, Value::from(e.to_string()), Value::Null)],
            };
            let checks = checks
                .into_iter()
                .map(|ch| Check { name: format!("c{:02}_{}", c.id, ch.name), ..ch })
                .collect();
            CriterionOutcome { id: c.id, title: c.title, budget_s: c.budget_s, checks, elapsed: start.elapsed() }
        })
        .collect()
}

pub fn report_all_outcome(outcomes: &[CriterionOutcome]) -> Outcome {
    let mut out = Outcome::default();
    for o in outcomes {
        out.results.insert(
            format!("c{:02}", o.id),
            json!({ "title": o.title, "passed": o.passed(), "checks": o.checks.len() }),
        );
        out.checks.extend(o.checks.iter().cloned());
    }
    out
}

fn unit_circle_samples(p: u64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let _ = p;
    (0..100).map(|_| rng.gen_range(0.01..PI - 0.01)).collect()
}

fn c01_tilde_ip() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SATAKE_SEED);
    for p in SMALL_PRIMES {
        let mut worst: f64 = 0.0;
        for theta in unit_circle_samples(p, &mut rng) {
            let t = tilde_ip(&SatakeLocalData::unit_circle(p, theta), IpSource::BruteForce { lam_max: 60 })?;
            worst = worst.max((t - 1.0 / p as f64).norm());
        }
        checks.push(Check::within(format!("float_p{p}"), "tilde_ip = 1/p", worst, TILDE_IP_TOL));
    }
    for p in SMALL_PRIMES {
        let want = BigRational::new(BigInt::from(1), BigInt::from(p));
        let mut ok = true;
        let mut tried = 0;
        for (n, d) in [(5, 4), (4, 5), (-5, 4), (3, 2), (-1, 3)] {
            let Ok(s) = SatakeLocalData::exact_rational(p, n, d) else { continue };
            let t = tilde_ip(&s, IpSource::ClosedForm)?;
            ok &= t.v.is_zero() && t.u == want;
            tried += 1;
        }
        checks.push(Check::judged(
            format!("exact_p{p}"),
            "tilde_ip = 1/p",
            ok && tried > 0,
            Value::from(format!("1/{p} for {tried} rational alpha")),
            num(0.0),
        ));
    }
    Ok(checks)
}

fn c02_poincare() -> CliResult<Vec<Check>> {
    let (_, residual, special) = weyl_generating_function(50);
    Ok(vec![
        Check::judged(
            "poincare_residual",
            "sum over W of x^mu(w) t^lambda(w) = (1+x)(1+t)/(1-xt)",
            residual.is_zero(),
            Value::from(residual.to_string()),
            num(0.0),
        ),
        Check::judged(
            "x1_specialization_residual",
            "x = 1 specialization = 2(1+t)/(1-t)",
            special.is_zero(),
            Value::from(special.to_string()),
            num(0.0),
        ),
    ])
}

fn c03_closed_vs_truncated() -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SATAKE_SEED);
    let mut worst: f64 = 0.0;
    for p in SMALL_PRIMES {
        for theta in unit_circle_samples(p, &mut rng) {
            let s = SatakeLocalData::unit_circle(p, theta);
            let (v, tail) = ip_brute_force(&s, 60)?;
            worst = worst.max((v - ip_closed_form(&s)?).norm() / tail);
        }
    }
    let s = SatakeLocalData::unit_circle(2, PI / 2.0);
    let (spot, _) = ip_brute_force(&s, 60)?;
    Ok(vec![
        Check::judged(
            "difference_over_tail",
            "|I_p truncated - I_p closed form| <= tail bound",
            worst <= 1.0,
            num(worst),
            num(1.0),
        ),
        Check::within("spot_p2_alpha_i", "I_2(alpha = i) = 1/3", (spot - 1.0 / 3.0).norm(), 1e-10),
    ])
}

fn c04_finite_part() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for q in [6u64, 30, 210] {
        let sat = arith::factorize(q)
            .into_iter()
            .map(|(p, _)| Ok((p, SatakeLocalData::exact_rational(p, 5, 4)?)))
            .collect::<equi_core::Result<_>>()?;
        let w = watson_finite_part(q, &sat)?;
        let want = BigRational::new(BigInt::from(1), BigInt::from(q));
        checks.push(Check::judged(
            format!("q{q}"),
            "prod_{p|q} tilde_ip = 1/q",
            w.product == want,
            Value::from(w.product.to_string()),
            num(0.0),
        ));
    }
    Ok(checks)
}

fn c05_hecke_eta() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, pattern, descriptor) in
        [("delta", EtaPattern::delta(), NewformDescriptor::delta()), ("f11", EtaPattern::f11(), NewformDescriptor::f11())]
    {
        let (same, _) = hecke_matches_eta(&pattern, &descriptor, 10_000)?;
        checks.push(Check::judged(
            format!("hecke_reproduces_eta_{name}"),
            "Hecke recursion from a(p) reproduces the eta-product coefficients",
            same,
            Value::from(10_000),
            num(0.0),
        ));
        let raw = eta_product_expansion(&pattern, 100_000)?;
        let table = normalize_coefficients(&raw, descriptor)?;
        let valid = table.validate();
        checks.push(Check::judged(
            format!("deligne_{name}"),
            "|lambda(n)| <= tau(n) through n = 10^5",
            valid.is_ok(),
            Value::from(valid.err().map(|e| e.to_string()).unwrap_or_else(|| "ok".into())),
            num(1e-9),
        ));
        if name == "f11" {
            let l = table.lambda(11);
            checks.push(Check::within("level_eigenvalue_f11", "lambda(11)^2 = 1/11", l * l - 1.0 / 11.0, 1e-12));
        }
    }
    Ok(checks)
}

fn c06_rankin_selberg() -> CliResult<Vec<Check>> {
    let grid = GridSpec::default();
    let mut checks = Vec::new();
    for (name, table) in [("delta", delta_table(100_000)?), ("f11", f11_table(100_000)?)] {
        let r = petersson_norm(&table, 100_000, &grid)?;
        checks.push(Check::within(
            format!("rel_err_{name}"),
            "<f, f> = q Gamma(k-1)/(4 pi)^(k-1) (k-1)/(2 pi^2) L(1, ad f)",
            r.rel_err,
            RANKIN_SELBERG_TOL,
        ));
    }
    Ok(checks)
}

fn c07_unfolding() -> CliResult<Vec<Check>> {
    let grid = GridSpec::default();
    let h = BumpFunction::standard();
    let mut checks = Vec::new();
    for (name, table) in [("q1", delta_table(20_000)?), ("q11", f11_table(20_000)?)] {
        let u = unfolding_check(&table, 2.0, &h, &grid)?;
        checks.push(Check::within(
            format!("rel_err_{name}"),
            "period of |f|^2 y^k against E(h_Y) = unfolded strip integral",
            u.rel_err,
            UNFOLDING_TOL,
        ));
    }
    Ok(checks)
}

fn c08_residue() -> CliResult<Vec<Check>> {
    let target = 3.0 / PI;
    let a = eisenstein_residue_check(UpperHalfPoint::new(0.0, 1.0)?, 1e-3)?;
    let b = eisenstein_residue_check(UpperHalfPoint::new(0.3, 0.8)?, 1e-3)?;
    Ok(vec![
        Check::within("z_i", "delta E(1 + delta, z) -> 3/pi", a - target, RESIDUE_TOL),
        Check::within("z_0.3+0.8i", "delta E(1 + delta, z) -> 3/pi", b - target, RESIDUE_TOL),
        Check::within("z_independence", "residue of E(s, z) at s = 1 does not depend on z", a - b, 1e-2),
    ])
}

fn c09_psi() -> CliResult<Vec<Check>> {
    Ok(psi_checks(10_000))
}

fn c10_sieve() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for z in [5.0, 10.0] {
        for l in [1i64, 4, 12] {
            let (c, _) = sieve_partition_checks(l, z, 10_000.0, &format!("_z{z}_l{l}"));
            checks.extend(c);
        }
    }
    Ok(checks)
}

fn c11_shifted_sum() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, table) in [("delta", delta_table(100_010)?), ("f11", f11_table(100_010)?)] {
        let mut w: f64 = 0.0;
        for l in 1..=10 {
            for x in [1e3, 1e4, 1e5] {
                let s = shifted_sum_exact(&table, l, x)?;
                w = w.max(s.value.abs() / shifted_sum_bound(&table, x, 0.2)?);
            }
        }
        checks.push(Check::recorded(
            format!("max_ratio_{name}"),
            "|sum lambda(n) lambda(n+l)| <= C x prod_{p<=x}(1 + 2|lambda(p)|/p)/(1 + log x)^(2-eps)",
            num(w),
        ));
        worst = worst.max(w);
    }
    checks.push(Check::judged(
        "calibration",
        "shifted-sum ratio stays below the frozen calibration constant",
        worst <= SHIFTED_SUM_RATIO_MAX,
        num(worst),
        num(SHIFTED_SUM_RATIO_MAX),
    ));
    Ok(checks)
}

fn c12_divisor() -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(DIVISOR_SEED);
    let primes = arith::primes_up_to(10_000);
    let qs: Vec<u64> = (0..200).map(|_| random_squarefree(&mut rng, &primes)).collect();
    let mut worst: f64 = 0.0;
    for &q in &qs {
        for k in [2u32, 12] {
            for eps in [0.1, 0.5] {
                worst = worst.max(divisor_lemma_ratio(q, k, eps)?.ratio);
            }
        }
    }
    Ok(vec![
        Check::recorded(
            "max_ratio",
            "sum_{d|q} d/log(kd)^(2-eps) <= C q loglog(e^e q)/log(kq)^(2-eps) for squarefree q",
            num(worst),
        ),
        Check::judged(
            "calibration",
            "divisor-lemma ratio stays below the frozen calibration constant",
            worst <= DIVISOR_RATIO_MAX,
            num(worst),
            num(DIVISOR_RATIO_MAX),
        ),
    ])
}

fn c13_is_bound() -> CliResult<Vec<Check>> {
    let h = BumpFunction::standard();
    let mut worst: f64 = 0.0;
    for k in [2u32, 12] {
        for x in [1.0, 10.0] {
            for l in [1i64, 5] {
                for s in [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.2), Complex64::new(0.3, 0.0)] {
                    let q = WeightedQuery::new(s, l, x, k)?;
                    for n in [1u64, 10, 100] {
                        let (v, b) = shift_integral_is(&q, n, &h, 3)?;
                        worst = worst.max(v.abs() / b);
                    }
                }
            }
        }
    }
    Ok(vec![
        Check::recorded(
            "c_a",
            "|I_s(m, n)| <= C_A (mn)^(1/2) Gamma(k-1)/(4 pi)^(k-1) (max(m,n)/(xk))^(-A), A = 3",
            num(worst),
        ),
        Check::judged(
            "calibration",
            "I_s ratio stays below the frozen calibration constant",
            worst <= LEMMA_CONSTANT_MAX,
            num(worst),
            num(LEMMA_CONSTANT_MAX),
        ),
    ])
}

/// Runs report-all on pools of two sizes and compares canonical JSON byte for byte.
pub fn determinism_check(par_a: usize, par_b: usize) -> CliResult<(Check, Vec<CriterionOutcome>)> {
    let run = |par: usize| -> CliResult<(String, Vec<CriterionOutcome>)> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(par)
            .build()
            .map_err(|e| crate::commands::CliError::Computation(e.to_string()))?;
        let outcomes = pool.install(|| run_criteria(&criteria()));
        let report = crate::build_report("report-all", &Default::default(), crate::config::PrecisionMode::Float64, report_all_outcome(&outcomes), 0);
        Ok((report.canonical_json(), outcomes))
    };
    let (a, outcomes) = run(par_a)?;
    let (b, _) = run(par_b)?;
    let check = Check {
        name: "c14_canonical_json_identical".into(),
        anchor: "identical RunConfig gives byte-identical canonical report".into(),
        status: if a == b { Status::Pass } else { Status::Fail },
        value: Value::from(format!("parallelism {par_a} vs {par_b}: {} vs {} bytes", a.len(), b.len())),
        tolerance: num(0.0),
    };
    Ok((check, outcomes))
}
