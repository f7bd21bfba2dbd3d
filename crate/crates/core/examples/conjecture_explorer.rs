//! Bounded radical evidence of the triple Jordan block against the span of
//! monomials with i3 ≥ i1 + 1.

use edlab::mzlab::conjecture45_explore;
use edlab::{parse_scalar, Conductor};

fn main() -> edlab::Result<()> {
    for (n, lam) in [(1, "1"), (1, "2"), (2, "-1")] {
        let k = Conductor::new(n)?;
        let l = parse_scalar(lam, &k)?;
        let r = conjecture45_explore(&l, 4, 6)?;
        let outside: Vec<String> = r.evidence_minus_v.iter().map(ToString::to_string).collect();
        println!(
            "lambda = {lam}: {} candidates, V ⊆ evidence: {}, evidence outside V: [{}]",
            r.candidates,
            r.passed,
            outside.join(", ")
        );
    }
    Ok(())
}
