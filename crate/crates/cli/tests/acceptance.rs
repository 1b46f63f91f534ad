//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use equi_cli::suite::determinism_check;
use std::time::Instant;

fn main() {
    let start = Instant::now();
    // Criteria 1-13 run inside the parallelism-1 pass, so their timings are sequential.
    let (det, outcomes) = match determinism_check(1, 8) {
        Ok(v) => v,
        Err(e) => {
            println!("FAIL  acceptance suite could not run: {e}");
            std::process::exit(1);
        }
    };
    let mut failed = 0;
    for o in &outcomes {
        let secs = o.elapsed.as_secs_f64();
        let in_budget = o.budget_s.is_none_or(|b| secs < b);
        let ok = o.passed() && in_budget;
        failed += usize::from(!ok);
        let budget = o.budget_s.map(|b| format!(" (budget {b} s)")).unwrap_or_default();
        println!("{}  {:>2}. {:<40} {:>8.2} s{}", if ok { "PASS" } else { "FAIL" }, o.id, o.title, secs, budget);
        for c in o.checks.iter().filter(|c| !c.passed() || !in_budget) {
            println!("        {} [{}] value {} tolerance {}", c.name, c.anchor, c.value, c.tolerance);
        }
    }
    let ok = det.passed();
    failed += usize::from(!ok);
    println!("{}  14. {:<40} {}", if ok { "PASS" } else { "FAIL" }, "deterministic report-all (1 vs 8 workers)", det.value);
    println!("{} of 14 criteria passed in {:.1} s", 14 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
