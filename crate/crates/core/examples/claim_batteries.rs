//! Runs every registered claim battery on its default instance.

use std::time::Instant;

use edlab::mzlab::{claim_ids, verify_claim, ClaimParams};

fn main() -> edlab::Result<()> {
    let params = ClaimParams::default();
    for id in claim_ids() {
        let start = Instant::now();
        let report = verify_claim(id, &params)?;
        println!(
            "{id:<16} {:<4} {:>2} checks  {:>8.2?}",
            if report.passed { "pass" } else { "FAIL" },
            report.checks.len(),
            start.elapsed()
        );
        for c in report.checks.iter().filter(|c| !c.passed) {
            println!("    {}: {}", c.name, c.detail);
        }
    }
    Ok(())
}
