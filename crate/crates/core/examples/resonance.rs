//! Multiplicative resonance: bounded enumeration against the structured
//! decision for eigenvalues q·ζ^j.

use edlab::scalar::resonance::{resonance_exists_bounded, resonance_exists_structured};
use edlab::{parse_scalar, Conductor};

fn main() -> edlab::Result<()> {
    let k = Conductor::new(6)?;
    let cases: [&[&str]; 4] = [&["2", "3"], &["2", "1/4"], &["z", "z^2"], &["-1", "z^3", "6"]];
    for case in cases {
        let values = case
            .iter()
            .map(|s| parse_scalar(s, &k))
            .collect::<Result<Vec<_>, _>>()?;
        let factored: Vec<_> = values.iter().filter_map(|v| v.factor_unit_form()).collect();
        let bounded = resonance_exists_bounded(&values, 8);
        let structured = resonance_exists_structured(&k, &factored)?;
        println!("{case:?}: bounded {bounded:?}, structured {structured:?}");
    }
    Ok(())
}
