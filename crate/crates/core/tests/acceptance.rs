//! Acceptance suite: one PASS/FAIL line per criterion, details for failed checks.
//! Exits nonzero if any criterion fails.

use uplink_core::validate::{run_criterion, Budget, CRITERIA};

fn main() {
    let budget = Budget::full();
    let mut failed = 0;
    for (id, title) in CRITERIA {
        match run_criterion(id, &budget) {
            Ok(r) => {
                println!("{}", r.summary());
                for c in r.failures() {
                    println!("    failed: {} = {:.6} (target {:.6}, tolerance {:.3e})", c.label, c.value, c.target, c.tolerance);
                }
                if !r.passed() {
                    failed += 1;
                }
            }
            Err(e) => {
                println!("criterion {id} [FAIL] {title}: error: {e}");
                failed += 1;
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
