//! Image slices and membership: exact verdicts for a degree-preserving map,
//! slack-limited verdicts for an affine one.

use edlab::image::{image_basis, member};
use edlab::maps::{Map, MapKind};
use edlab::{parse_polynomial, Conductor};

fn main() -> edlab::Result<()> {
    let k = Conductor::new(3)?;
    let delta = Map::parse(MapKind::Endomorphism, &["z*x1 + x2", "z*x2"], &k)?;
    let basis = image_basis(&delta, 4, None);
    println!("mode {:?}, exact = {}", basis.mode, basis.exact);
    for s in &basis.slices {
        println!(
            "  degree {}: dim δ(V_e) = {} of {}",
            s.degree, s.dimension, s.domain_dim
        );
    }
    for src in ["x1^2*x2", "x1^3", "x1^4", "x1^6"] {
        let q = parse_polynomial(src, 2, &k)?;
        let v = member(&delta, &q, q.degree().unwrap_or(0), None)?;
        let w = v.witness.map(|w| format!("  witness {w}")).unwrap_or_default();
        println!("  {src}: {:?}{w}", v.status);
    }

    let q = Conductor::new(1)?;
    let affine = Map::parse(MapKind::Endomorphism, &["x1 + 1", "2*x2"], &q)?;
    for src in ["1", "x2", "x1^2"] {
        let p = parse_polynomial(src, 2, &q)?;
        let v = member(&affine, &p, 2, Some(2))?;
        println!("affine {src}: {:?}", v.status);
    }
    Ok(())
}
