//! Radical scans, the ideal-radical sufficient condition and MZ spot checks.

use edlab::maps::{Map, MapKind};
use edlab::mzlab::{check_prop27, mz_spot_check, radical_scan, ScanOptions};
use edlab::Conductor;

fn main() -> edlab::Result<()> {
    let k = Conductor::new(3)?;
    let delta = Map::parse(MapKind::Endomorphism, &["z*x1 + x2", "z*x2", "2*x3"], &k)?;

    let scan = radical_scan(&delta, 3, 6, &[], ScanOptions::default())?;
    for c in &scan.candidates {
        println!("  {:<12} {:?}", c.candidate.to_string(), c.verdict);
    }
    let evidence: Vec<String> = scan.evidence_monomials().iter().map(ToString::to_string).collect();
    println!("radical evidence: {}", evidence.join(", "));

    let p27 = check_prop27(&delta, None, 3, 6)?;
    println!("ideal-radical condition: {:?}", p27.status);

    let mz = mz_spot_check(&delta, 2, 6, 2, ScanOptions::default())?;
    println!(
        "MZ spot check: {} pairs, {} violations, window {:?}",
        mz.pairs_checked,
        mz.violations.len(),
        mz.window
    );
    Ok(())
}
