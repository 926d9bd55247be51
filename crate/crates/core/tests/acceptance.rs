//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use asai_core::suite::{criterion_ids, run_criterion, SuiteConfig};

fn main() {
    let cfg = SuiteConfig::default();
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> =
            criterion_ids().into_iter().map(|id| s.spawn(move || run_criterion(id, &cfg).unwrap())).collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for r in &results {
        println!("{}", r.line());
        if !r.passed {
            failed += 1;
            println!("       {}", r.detail);
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
