//! Parsing, printing and arithmetic of sparse polynomials in graded-lex order.

use edlab::polyring::monomials_of_degree;
use edlab::{parse_polynomial, Conductor};

fn main() -> edlab::Result<()> {
    let k = Conductor::new(3)?;
    let f = parse_polynomial("(x1 + z*x2)^2 - 3/2*x1^2 + 1", 2, &k)?;
    let g = parse_polynomial("x1*x2 - z^2", 2, &k)?;
    println!("f = {f}");
    println!("g = {g}");
    println!("f*g = {}", &f * &g);
    println!("d/dx2 f = {}", f.partial_derivative(1));
    println!("deg 2 part of f*g: {}", (&f * &g).homogeneous_component(2));

    // printing and parsing round-trip
    let again = parse_polynomial(&f.to_string(), 2, &k)?;
    assert_eq!(again, f);

    let names: Vec<String> = monomials_of_degree(3, 2).iter().map(ToString::to_string).collect();
    println!("degree-2 monomials in 3 variables, descending: {}", names.join(" > "));

    match parse_polynomial("x1 + * x2", 2, &k) {
        Ok(_) => unreachable!(),
        Err(e) => println!("parse error: {e}"),
    }
    Ok(())
}
