//! E-derivations, derivations, their structural shapes and conjugation.

use edlab::maps::{classify, conjugate, Map, MapKind, PolyAutomorphism};
use edlab::{parse_polynomial, parse_scalar, Conductor};

fn main() -> edlab::Result<()> {
    let k = Conductor::new(3)?;
    let delta = Map::parse(MapKind::Endomorphism, &["z*x1 + x2", "z*x2"], &k)?;
    let d = Map::parse(MapKind::Derivation, &["x2 - 1/2*x3", "x3", "0"], &Conductor::new(1)?)?;
    println!("delta = {delta}   shape: {}", classify(&delta).name());
    println!("D     = {d}   shape: {}", classify(&d).name());

    // δ(ab) = δ(a)b + aδ(b) − δ(a)δ(b)
    let a = parse_polynomial("x1^2 + x2", 2, &k)?;
    let b = parse_polynomial("x1*x2 - 1", 2, &k)?;
    let lhs = delta.apply(&(&a * &b));
    let (da, db) = (delta.apply(&a), delta.apply(&b));
    let rhs = &(&(&da * &b) + &(&a * &db)) - &(&da * &db);
    println!("product rule holds: {}", lhs == rhs);

    // σ(x1) = x1 + c·x2^2 is triangular, so the conjugate keeps the shape class
    let c = parse_scalar("1/2", &k)?;
    let sigma = PolyAutomorphism::elementary(0, &parse_scalar("1", &k)?, &parse_polynomial("x2^2", 2, &k)?.scale(&c))?;
    let conj = conjugate(&delta, &sigma)?;
    println!("sigma^-1 ∘ phi ∘ sigma: {conj}   shape: {}", classify(&conj).name());
    Ok(())
}
