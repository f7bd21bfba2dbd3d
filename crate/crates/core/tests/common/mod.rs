//! Random instances shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use std::sync::Arc;

use edlab::maps::{Endomorphism, Map, PolyAutomorphism};
use edlab::polyring::Monomial;
use edlab::{Conductor, Matrix, Polynomial, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

pub const CONDUCTORS: [u32; 5] = [1, 3, 4, 5, 12];

pub fn field(n: u32) -> Arc<Conductor> {
    Conductor::new(n).expect("valid conductor")
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(k: &Arc<Conductor>, v: i64) -> Scalar {
    Scalar::from_integer(k, v)
}

/// Coordinates `(numerator, denominator)`; only the first `φ(N)` are used.
pub type RawScalar = Vec<(i64, i64)>;
pub type RawPoly = Vec<(Vec<u32>, RawScalar)>;

pub fn scalar_from(k: &Arc<Conductor>, raw: &[(i64, i64)]) -> Scalar {
    let coords = (0..k.degree())
        .map(|i| raw.get(i).map_or_else(|| rat(0, 1), |&(p, q)| rat(p, q)))
        .collect();
    Scalar::from_coords(k, coords).expect("coordinate count matches")
}

/// Terms whose monomial degree exceeds `max_deg` are dropped.
pub fn poly_from(k: &Arc<Conductor>, n: usize, max_deg: u32, raw: &RawPoly) -> Polynomial {
    let terms = raw.iter().filter_map(|(e, c)| {
        let exps: Vec<u32> = (0..n).map(|i| e.get(i).copied().unwrap_or(0)).collect();
        let m = Monomial::new(exps);
        (m.degree() <= max_deg).then(|| (m, scalar_from(k, c)))
    });
    Polynomial::from_terms(k, n, terms)
}

pub fn raw_scalar() -> impl Strategy<Value = RawScalar> {
    prop::collection::vec((-5i64..=5, 1i64..=3), 4)
}

pub fn raw_poly(max_deg: u32, terms: usize) -> impl Strategy<Value = RawPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, 3), raw_scalar()), 0..=terms)
}

pub fn conductor() -> impl Strategy<Value = u32> {
    prop::sample::select(CONDUCTORS.to_vec())
}

/// Linear part of an invertible change of variables: unit lower times
/// upper triangular with nonzero diagonal.
pub fn invertible_from(k: &Arc<Conductor>, n: usize, lower: &[i64], upper: &[i64], diag: &[i64]) -> Matrix {
    let mut l = Matrix::identity(k, n);
    let mut u = Matrix::identity(k, n);
    let mut idx = 0;
    for i in 0..n {
        for j in 0..n {
            if j < i {
                l.set(i, j, int(k, lower[idx % lower.len()]));
                u.set(j, i, int(k, upper[idx % upper.len()]));
                idx += 1;
            }
        }
        let d = diag[i % diag.len()];
        u.set(i, i, int(k, if d == 0 { 1 } else { d }));
    }
    l.mul(&u)
}

pub fn linear_automorphism(t: &Matrix) -> PolyAutomorphism {
    let zero = vec![Scalar::zero(t.field()); t.nrows()];
    PolyAutomorphism::affine(t, &zero).expect("invertible")
}

pub fn endo(images: Vec<Polynomial>) -> Map {
    Map::ederivation(Endomorphism::new(images).expect("consistent ring"))
}

// rand-based generators for the acceptance runner

pub fn rand_rational<R: Rng>(rng: &mut R, span: i64, den: i64) -> BigRational {
    rat(rng.gen_range(-span..=span), rng.gen_range(1..=den))
}

pub fn rand_scalar<R: Rng>(rng: &mut R, k: &Arc<Conductor>) -> Scalar {
    let coords = (0..k.degree()).map(|_| rand_rational(rng, 4, 3)).collect();
    Scalar::from_coords(k, coords).expect("coordinate count matches")
}

/// Random polynomial in the variables `vars` (0-based) with degree ≤ `max_deg`.
pub fn rand_poly_in<R: Rng>(
    rng: &mut R,
    k: &Arc<Conductor>,
    n: usize,
    vars: &[usize],
    max_deg: u32,
    terms: usize,
) -> Polynomial {
    let mut p = Polynomial::zero(k, n);
    if vars.is_empty() {
        return p;
    }
    for _ in 0..terms {
        let mut exps = vec![0u32; n];
        let d = rng.gen_range(0..=max_deg);
        for _ in 0..d {
            exps[vars[rng.gen_range(0..vars.len())]] += 1;
        }
        p.add_term(Monomial::new(exps), &Scalar::from_rational(k, rand_rational(rng, 4, 3)));
    }
    p
}

/// Nonzero rational with small numerator and denominator.
pub fn rand_nonzero_rational<R: Rng>(rng: &mut R) -> BigRational {
    loop {
        let r = rand_rational(rng, 5, 3);
        if r != rat(0, 1) {
            return r;
        }
    }
}
