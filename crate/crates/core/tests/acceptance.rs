//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use kf_core::bounds::DEFAULT_BITS;
use kf_core::verify::{run_check, Suite};

fn main() {
    let mut failed = Vec::new();
    for id in Suite::Full.ids() {
        let c = run_check(id, DEFAULT_BITS);
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {} ({} ms): {}", c.id, c.name, c.runtime_ms, c.details.join("; "));
        if !c.passed {
            failed.push(c.id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
