//! Roots of small characteristic polynomials over Q(ζ_N).
//!
//! The search covers roots of the form `q·ζ^j` (rational `q`), any root of a
//! quadratic factor whose discriminant has a square root of the form `q·ζ^j`
//! (or any square root at all when φ(N) = 2), and repeated roots. Anything
//! else is reported as unsupported.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{divisors, rational_sqrt, Conductor, Scalar};

/// Univariate polynomial with `Scalar` coefficients, lowest degree first.
type UPoly = Vec<Scalar>;

fn trim(p: &mut UPoly) {
    while p.len() > 1 && p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
}

fn eval(p: &[Scalar], t: &Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::zero(t.field()), |acc, c| &(&acc * t) + c)
}

/// Divides by `(t - r)`, assuming `r` is a root.
fn deflate(p: &[Scalar], r: &Scalar) -> UPoly {
    let n = p.len() - 1;
    let mut q = vec![Scalar::zero(r.field()); n];
    let mut carry = Scalar::zero(r.field());
    for k in (0..n).rev() {
        carry = &p[k + 1] + &(&carry * r);
        q[k] = carry.clone();
    }
    q
}

fn derivative(p: &[Scalar]) -> UPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale_int(k as i64))
        .collect()
}

fn rem(a: &[Scalar], b: &[Scalar]) -> UPoly {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].inv().expect("trimmed divisor");
    while r.len() > db && !is_zero_poly(&r) {
        let shift = r.len() - 1 - db;
        let c = &r[r.len() - 1] * &lead;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &(&c * bj);
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn is_zero_poly(p: &[Scalar]) -> bool {
    p.iter().all(Scalar::is_zero)
}

fn gcd(a: &[Scalar], b: &[Scalar]) -> UPoly {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !is_zero_poly(&y) {
        let r = rem(&x, &y);
        x = std::mem::replace(&mut y, r);
    }
    let lead = x.last().expect("nonempty").inv().expect("nonzero gcd");
    x.iter().map(|c| c * &lead).collect()
}

/// Rational roots of an integer-coefficient polynomial (lowest degree first).
fn rational_roots(coeffs: &[BigInt]) -> Vec<BigRational> {
    let mut c: Vec<BigInt> = coeffs.to_vec();
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    let mut roots = Vec::new();
    if c.len() <= 1 {
        return roots;
    }
    let low = c.iter().position(|x| !x.is_zero()).expect("nonzero poly");
    if low > 0 {
        roots.push(BigRational::zero());
        c.drain(..low);
    }
    if c.len() <= 1 {
        return roots;
    }
    let eval_q = |x: &BigRational| {
        c.iter().rev().fold(BigRational::zero(), |acc, k| {
            acc * x + BigRational::from_integer(k.clone())
        })
    };
    for p in divisors(&c[0]) {
        for q in divisors(c.last().expect("nonempty")) {
            for sign in [1, -1] {
                let cand = BigRational::new(&p * sign, q.clone());
                if eval_q(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

/// Roots of the form `q·ζ^j` with `q` rational and nonzero.
fn unit_form_roots(p: &[Scalar], field: &Arc<Conductor>) -> Vec<Scalar> {
    let mut found: Vec<Scalar> = Vec::new();
    for j in 0..field.order() as i64 {
        let w = Scalar::root_of_unity(field, j);
        // p(s·w) as a polynomial in s, one rational polynomial per coordinate
        let scaled: Vec<Scalar> = p.iter().enumerate().map(|(k, c)| c * &w.pow(k as u64)).collect();
        let Some(coord) = (0..field.degree()).find(|&i| scaled.iter().any(|c| !c.coords()[i].is_zero())) else {
            continue;
        };
        let rat: Vec<BigRational> = scaled.iter().map(|c| c.coords()[coord].clone()).collect();
        let lcm = rat.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let ints: Vec<BigInt> = rat.iter().map(|r| (r * &lcm).to_integer()).collect();
        for s in rational_roots(&ints) {
            if s.is_zero() {
                continue;
            }
            let cand = w.scale(&s);
            if eval(p, &cand).is_zero() && !found.contains(&cand) {
                found.push(cand);
            }
        }
    }
    found
}

/// A square root of `d` in Q(ζ_N), if the search finds one.
pub(crate) fn sqrt(d: &Scalar) -> Option<Scalar> {
    let field = d.field();
    if d.is_zero() {
        return Some(d.clone());
    }
    for j in 0..field.order() as i64 {
        let w = Scalar::root_of_unity(field, j);
        let r = d * &w.pow(2).inv().expect("unit");
        if let Some(q) = r.to_rational().and_then(|q| rational_sqrt(&q)) {
            return Some(w.scale(&q));
        }
    }
    if field.degree() == 2 {
        return sqrt_quadratic_field(d);
    }
    None
}

/// Solves `(d0 + d1 ζ)² = Δ` when ζ satisfies `ζ² + p1 ζ + p0 = 0`.
fn sqrt_quadratic_field(delta: &Scalar) -> Option<Scalar> {
    let field = delta.field();
    let phi = field.cyclotomic_poly();
    let p0 = BigRational::from_integer(phi[0].clone());
    let p1 = BigRational::from_integer(phi[1].clone());
    let (e0, e1) = (delta.coords()[0].clone(), delta.coords()[1].clone());
    // with w = d1²: (p1² - 4p0) w² + (2 e1 p1 - 4 e0) w + e1² = 0
    let a = &p1 * &p1 - BigRational::from_integer(4.into()) * &p0;
    let b = BigRational::from_integer(2.into()) * &e1 * &p1 - BigRational::from_integer(4.into()) * &e0;
    let c = &e1 * &e1;
    let mut ws = Vec::new();
    if a.is_zero() {
        if !b.is_zero() {
            ws.push(-c / b);
        }
    } else {
        let disc = &b * &b - BigRational::from_integer(4.into()) * &a * &c;
        let s = rational_sqrt(&disc)?;
        let two_a = BigRational::from_integer(2.into()) * &a;
        ws.push((-&b + &s) / &two_a);
        ws.push((-&b - s) / two_a);
    }
    for w in ws.into_iter().filter(|w| w.is_positive()) {
        let Some(d1) = rational_sqrt(&w) else { continue };
        let d0 = (&e1 + &p1 * &w) / (BigRational::from_integer(2.into()) * &d1);
        let y = Scalar::from_coords(field, vec![d0, d1]).ok()?;
        if &(&y * &y) == delta {
            return Some(y);
        }
    }
    None
}

/// All roots of the monic polynomial `p` (degree ≤ 3), with multiplicity.
pub(crate) fn roots(p: &[Scalar], field: &Arc<Conductor>) -> Result<Vec<Scalar>> {
    let mut p = p.to_vec();
    trim(&mut p);
    let mut out = Vec::new();
    while p.len() > 1 {
        let deg = p.len() - 1;
        let lead_inv = p[deg].inv()?;
        if deg == 1 {
            out.push(-(&p[0] * &lead_inv));
            break;
        }
        if p[0].is_zero() {
            p.remove(0);
            out.push(Scalar::zero(field));
            continue;
        }
        if let Some(r) = unit_form_roots(&p, field).into_iter().next() {
            p = deflate(&p, &r);
            out.push(r);
            continue;
        }
        if deg == 2 {
            let (b, c) = (&p[1] * &lead_inv, &p[0] * &lead_inv);
            let disc = &(&b * &b) - &c.scale_int(4);
            let Some(s) = sqrt(&disc) else {
                return Err(unsupported(&p));
            };
            let half = BigRational::new(1.into(), 2.into());
            out.push((&s - &b).scale(&half));
            out.push((-(&s + &b)).scale(&half));
            break;
        }
        // a repeated root is a root of gcd(p, p'), which has lower degree
        let g = gcd(&p, &derivative(&p));
        if g.len() > 1 {
            let r = roots(&g, field)?.into_iter().next().expect("positive degree");
            p = deflate(&p, &r);
            out.push(r);
            continue;
        }
        return Err(unsupported(&p));
    }
    Ok(out)
}

fn unsupported(p: &[Scalar]) -> Error {
    let shown: Vec<String> = p.iter().map(|c| format!("({c})")).collect();
    Error::UnsupportedField(format!(
        "no eigenvalue of the factor with coefficients [{}] (lowest first) was found among \
         q*z^j candidates or square-root solutions; supply T explicitly or enlarge the conductor",
        shown.join(", ")
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(field: &Arc<Conductor>, v: &[i64]) -> UPoly {
        v.iter().map(|&x| Scalar::from_integer(field, x)).collect()
    }

    #[test]
    fn rational_and_unit_roots() {
        let k = Conductor::new(4).unwrap();
        // t^2 + 1 over Q(i)
        let r = roots(&ints(&k, &[1, 0, 1]), &k).unwrap();
        assert_eq!(r.len(), 2);
        for x in &r {
            assert!(eval(&ints(&k, &[1, 0, 1]), x).is_zero());
        }
        // (t-2)(t-3)(t-5)
        let r = roots(&ints(&k, &[-30, 31, -10, 1]), &k).unwrap();
        let mut vals: Vec<String> = r.iter().map(ToString::to_string).collect();
        vals.sort();
        assert_eq!(vals, ["2", "3", "5"]);
    }

    #[test]
    fn quadratic_field_square_roots() {
        let k = Conductor::new(3).unwrap();
        // (1 + 2ζ)^2 = -3 in Q(ζ_3); also check a non-unit-form square
        let y = Scalar::one(&k) + Scalar::root_of_unity(&k, 1).scale_int(2);
        let s = sqrt(&(&y * &y)).unwrap();
        assert_eq!(&s * &s, &y * &y);
        let y = Scalar::from_integer(&k, 3) + Scalar::root_of_unity(&k, 1);
        let s = sqrt(&(&y * &y)).unwrap();
        assert_eq!(&s * &s, &y * &y);
        assert!(sqrt(&Scalar::from_integer(&k, 2)).is_none());
    }

    #[test]
    fn unsupported_cubic() {
        let k = Conductor::new(1).unwrap();
        // t^3 - 2 has no rational root
        assert!(matches!(
            roots(&ints(&k, &[-2, 0, 0, 1]), &k),
            Err(Error::UnsupportedField(_))
        ));
        // (t - 1/2)^3 found as a rational root
        let p: UPoly = [-1, 6, -12, 8]
            .iter()
            .map(|&x| Scalar::rational(&k, x, 8).unwrap())
            .collect();
        let r = roots(&p, &k).unwrap();
        assert!(r.iter().all(|x| *x == Scalar::rational(&k, 1, 2).unwrap()));
    }
}
