//! Comparing image slices with ideal slices and with another map's image.

use edlab::image::{compare_images, ideal_slice_test};
use edlab::maps::{Map, MapKind};
use edlab::{parse_polynomial, Conductor};

fn main() -> edlab::Result<()> {
    let q = Conductor::new(1)?;
    let diag = Map::parse(MapKind::Endomorphism, &["2*x1 + x2", "2*x2"], &q)?;
    let one = parse_polynomial("x1", 2, &q)?;
    let cmp = ideal_slice_test(&diag, &[one.clone(), parse_polynomial("x2", 2, &q)?], 5, None)?;
    println!("Im δ vs (x1, x2) up to degree 5: equal = {}", cmp.equal);

    let k = Conductor::new(3)?;
    let jordan = Map::parse(MapKind::Endomorphism, &["z*x1 + x2", "z*x2"], &k)?;
    let cmp = ideal_slice_test(&jordan, &[parse_polynomial("x2", 2, &k)?], 6, None)?;
    println!(
        "ζ_3 Jordan block vs (x2): equal = {}, first discrepancy at degree {:?}",
        cmp.equal, cmp.first_discrepancy
    );

    let triple = Map::parse(MapKind::Endomorphism, &["x1 + x2", "x2 + x3", "x3"], &q)?;
    let d = Map::parse(MapKind::Derivation, &["x2 - 1/2*x3", "x3", "0"], &q)?;
    let cmp = compare_images(&triple, &d, 5, None)?;
    for c in &cmp.degrees {
        println!("  degree {}: {} vs {}", c.degree, c.left_dim, c.right_dim);
    }
    println!("triple Jordan δ and D agree up to degree 5: {}", cmp.equal);
    Ok(())
}
