//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;
use std::thread;

use vaisman_core::suite::{run_criterion, CriterionResult, SuiteConfig, CRITERIA};

fn report(id: u8, outcome: &vaisman_core::Result<CriterionResult>) -> bool {
    match outcome {
        Ok(r) => {
            let verdict = if r.passed { "PASS" } else { "FAIL" };
            println!("criterion {id} {verdict}: {} ({} checks, {} failures)", r.name, r.checks, r.failures.len());
            for n in &r.notes {
                println!("    {n}");
            }
            for f in r.failures.iter().take(10) {
                println!("    failed: {f}");
            }
            r.passed
        }
        Err(e) => {
            println!("criterion {id} FAIL: error: {e}");
            false
        }
    }
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let outcomes: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = CRITERIA.iter().map(|(id, _)| (*id, s.spawn(|| run_criterion(*id, &cfg)))).collect();
        handles.into_iter().map(|(id, h)| (id, h.join().expect("criterion thread"))).collect()
    });
    let mut passed = 0;
    for (id, outcome) in &outcomes {
        passed += usize::from(report(*id, outcome));
    }
    println!("acceptance: {passed}/{} criteria passed", outcomes.len());
    if passed == outcomes.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
