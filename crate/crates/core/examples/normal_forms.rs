//! Normalizing automorphisms: shifting fixed points to the origin,
//! linearizing triangular derivations, and the two-variable affine cases.

use edlab::maps::{Map, MapKind};
use edlab::normalize::{linearize_triangular_derivation, normalize_affine_dim2, shift_to_origin, NormalizationResult};
use edlab::Conductor;

fn show(title: &str, input: &Map, r: &NormalizationResult) -> edlab::Result<()> {
    println!("{title}");
    println!("  input:      {input}");
    println!("  sigma:      {}", r.sigma.forward());
    println!("  normalized: {}", r.normalized);
    println!("  verified:   {}", r.verify(input)?);
    Ok(())
}

fn main() -> edlab::Result<()> {
    let q = Conductor::new(1)?;
    let tri = Map::parse(
        MapKind::Endomorphism,
        &["2*x1 + x2*x3 + 1", "3*x2 + x3 - 2", "5*x3 + 4"],
        &q,
    )?;
    show("shift to origin", &tri, &shift_to_origin(&tri)?)?;

    let k5 = Conductor::new(5)?;
    let der = Map::parse(
        MapKind::Derivation,
        &["x1", "z*x2 + x1^2", "z^2*x3 + x1*x2 + x1^3"],
        &k5,
    )?;
    show("linearization", &der, &linearize_triangular_derivation(&der)?)?;

    for images in [
        ["x1 + x2 + 3", "-x1 + 3*x2 - 1"],
        ["x1 + x2 + 1", "x2"],
        ["2*x1 + 1", "3*x2"],
    ] {
        let m = Map::parse(MapKind::Endomorphism, &images, &q)?;
        let r = normalize_affine_dim2(&m)?;
        show("affine, two variables", &m, &r)?;
        println!("  certificate: {:?}", r.certificate);
    }

    let resonant = Map::parse(MapKind::Derivation, &["x1", "2*x2 + x1^2"], &q)?;
    match linearize_triangular_derivation(&resonant) {
        Err(e) => println!("resonant control: {e}"),
        Ok(_) => unreachable!("x1^2 is resonant with a_2 = 2"),
    }
    Ok(())
}
