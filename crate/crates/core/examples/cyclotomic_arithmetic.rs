//! Exact arithmetic in Q(ζ_12): field operations, orders of roots of unity
//! and the factored form q·ζ^j used by the resonance oracle.

use edlab::{parse_scalar, Conductor, Scalar};

fn main() -> edlab::Result<()> {
    let k = Conductor::new(12)?;
    println!("Q(z_{}) has degree {} over Q", k.order(), k.degree());

    let z = Scalar::root_of_unity(&k, 1);
    let a = parse_scalar("3/2 - 2*z", &k)?;
    let b = parse_scalar("z^5 + 1/3", &k)?;
    println!("a = {a}");
    println!("b = {b}");
    println!("a*b = {}", &a * &b);
    println!("a/b = {}", a.try_div(&b)?);
    println!("z^12 = {}", z.pow(12));

    for j in [1, 2, 3, 4, 6] {
        let w = Scalar::root_of_unity(&k, j);
        println!("order of z^{j} = {:?}", w.root_of_unity_order());
    }

    let lam = parse_scalar("-2*z^3", &k)?;
    match lam.factor_unit_form() {
        Some(f) => println!("{lam} = {}·z^{}", f.q, f.j),
        None => println!("{lam} is not of the form q·z^j"),
    }
    Ok(())
}
