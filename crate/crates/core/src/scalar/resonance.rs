//! Multiplicative relations Π λ_j^{i_j} = 1 among eigenvalues.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{factorize, nullspace, rank, Conductor, Scalar};
use crate::error::{Error, Result};

/// An eigenvalue written as `q·ζ_N^j` with `q > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredEigenvalue {
    #[serde(serialize_with = "ser_rational")]
    pub q: BigRational,
    pub j: i64,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&super::fmt_rational(r))
}

impl FactoredEigenvalue {
    pub fn new(q: BigRational, j: i64) -> FactoredEigenvalue {
        FactoredEigenvalue { q, j }
    }

    pub fn to_scalar(&self, field: &std::sync::Arc<Conductor>) -> Scalar {
        Scalar::root_of_unity(field, self.j).scale(&self.q)
    }
}

/// Largest number of exponent vectors scanned when shrinking a structural
/// witness to the graded-lex least one.
const MINIMIZE_BUDGET: u128 = 2_000_000;

/// Largest number of eigenvalues accepted by the structural decision, which
/// enumerates column subsets.
const MAX_STRUCTURED: usize = 16;

/// Calls `f` on every vector in ℕ^m with coordinate sum `d`, in ascending
/// lexicographic order (so `(0,…,0,d)` comes first).
pub(crate) fn for_each_composition<B>(
    m: usize,
    d: u32,
    f: &mut impl FnMut(&[u32]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    fn walk<B>(
        pos: usize,
        left: u32,
        cur: &mut Vec<u32>,
        f: &mut impl FnMut(&[u32]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            return f(cur);
        }
        for e in 0..=left {
            cur[pos] = e;
            walk(pos + 1, left - e, cur, f)?;
        }
        ControlFlow::Continue(())
    }
    if m == 0 {
        return ControlFlow::Continue(());
    }
    let mut cur = vec![0; m];
    walk(0, d, &mut cur, f)
}

/// First exponent vector of total degree in `1..=bound`, in ascending
/// graded-lex order, with Π λ_j^{i_j} = 1.
///
/// Absence only means no relation of degree ≤ `bound`.
pub fn resonance_exists_bounded(lambdas: &[Scalar], bound: u32) -> Option<Vec<u32>> {
    let first = lambdas.first()?;
    let field = first.field();
    let powers: Vec<Vec<Scalar>> = lambdas
        .iter()
        .map(|l| {
            let mut row = vec![Scalar::one(field)];
            for k in 1..=bound as usize {
                let next = &row[k - 1] * l;
                row.push(next);
            }
            row
        })
        .collect();
    for d in 1..=bound {
        let found = for_each_composition(lambdas.len(), d, &mut |v| {
            let mut acc = Scalar::one(field);
            for (row, &e) in powers.iter().zip(v) {
                if e > 0 {
                    acc = &acc * &row[e as usize];
                }
            }
            if acc.is_one() {
                ControlFlow::Break(v.to_vec())
            } else {
                ControlFlow::Continue(())
            }
        });
        if let ControlFlow::Break(v) = found {
            return Some(v);
        }
    }
    None
}

/// Decides whether some nonzero `i ∈ ℕ^m` gives Π (q_k ζ^{j_k})^{i_k} = 1.
///
/// The condition splits into `V·i = 0`, where column k of `V` is the prime
/// exponent vector of `q_k`, and `Σ i_k j_k ≡ 0 (mod N)`. A nonnegative
/// solution of the first exists iff the cone `{V·x = 0, x ≥ 0}` has an
/// extreme ray, and every extreme ray is the one-dimensional kernel of a
/// column subset of rank `|S| - 1` with entries of one sign; scaling it by
/// `N / gcd(N, j·x)` fixes the congruence. The witness found that way is then
/// replaced by the graded-lex least relation of no larger degree, unless that
/// search would exceed a fixed budget.
pub fn resonance_exists_structured(field: &Conductor, parts: &[FactoredEigenvalue]) -> Result<Option<Vec<u32>>> {
    if let Some(p) = parts.iter().find(|p| !p.q.is_positive()) {
        return Err(Error::RejectedInput(format!(
            "factored eigenvalue needs a positive rational part, got {}",
            super::fmt_rational(&p.q)
        )));
    }
    let m = parts.len();
    if m > MAX_STRUCTURED {
        return Err(Error::RejectedInput(format!(
            "at most {MAX_STRUCTURED} eigenvalues supported, got {m}"
        )));
    }
    let n = field.order() as i64;
    let matrix = prime_exponent_matrix(parts);
    let js: Vec<i64> = parts.iter().map(|p| p.j.rem_euclid(n)).collect();

    let Some(ray) = find_nonnegative_ray(&matrix, m) else {
        return Ok(None);
    };
    let dot = ray
        .iter()
        .zip(&js)
        .fold(0i64, |acc, (&x, &j)| (acc + (x as i64 % n) * j) % n);
    let t = (n / dot.gcd(&n)) as u32;
    let witness: Vec<u32> = ray.iter().map(|&x| x * t).collect();
    let degree: u32 = witness.iter().sum();

    let check = |v: &[u32]| {
        let cong = v.iter().zip(&js).fold(0i64, |acc, (&e, &j)| (acc + e as i64 * j) % n);
        cong == 0
            && matrix
                .iter()
                .all(|row| row.iter().zip(v).map(|(a, &e)| a * e as i64).sum::<i64>() == 0)
    };
    if binomial(degree as u128 + m as u128, m as u128) > MINIMIZE_BUDGET {
        return Ok(Some(witness));
    }
    for d in 1..=degree {
        if let ControlFlow::Break(v) = for_each_composition(m, d, &mut |v| {
            if check(v) {
                ControlFlow::Break(v.to_vec())
            } else {
                ControlFlow::Continue(())
            }
        }) {
            return Ok(Some(v));
        }
    }
    Ok(Some(witness))
}

fn prime_exponent_matrix(parts: &[FactoredEigenvalue]) -> Vec<Vec<i64>> {
    let mut rows: BTreeMap<BigInt, Vec<i64>> = BTreeMap::new();
    let m = parts.len();
    for (k, p) in parts.iter().enumerate() {
        for (prime, e) in factorize(p.q.numer()) {
            rows.entry(prime).or_insert_with(|| vec![0; m])[k] += e as i64;
        }
        for (prime, e) in factorize(p.q.denom()) {
            rows.entry(prime).or_insert_with(|| vec![0; m])[k] -= e as i64;
        }
    }
    rows.into_values().collect()
}

/// A primitive nonzero integer vector `x ≥ 0` with `V·x = 0`, if any.
fn find_nonnegative_ray(matrix: &[Vec<i64>], m: usize) -> Option<Vec<u32>> {
    for size in 1..=m {
        for subset in subsets_of_size(m, size) {
            let sub: Vec<Vec<BigRational>> = matrix
                .iter()
                .map(|row| {
                    subset
                        .iter()
                        .map(|&c| BigRational::from_integer(row[c].into()))
                        .collect()
                })
                .collect();
            if !sub.is_empty() && rank(&sub) != size - 1 {
                continue;
            }
            let kernel = if sub.is_empty() {
                // no primes at all: every column is zero
                if size != 1 {
                    continue;
                }
                vec![vec![BigRational::from_integer(1.into())]]
            } else {
                nullspace(&sub, size)
            };
            let [v] = kernel.as_slice() else { continue };
            let positive = v.iter().all(Signed::is_positive);
            let negative = v.iter().all(Signed::is_negative);
            if !positive && !negative {
                continue;
            }
            let lcm = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer().abs()).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            let mut ray = vec![0u32; m];
            for (&c, x) in subset.iter().zip(&ints) {
                ray[c] = (x / &g).to_u32()?;
            }
            return Some(ray);
        }
    }
    None
}

fn subsets_of_size(m: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, size, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn field(n: u32) -> Arc<Conductor> {
        Conductor::new(n).unwrap()
    }

    fn fe(p: i64, q: i64, j: i64) -> FactoredEigenvalue {
        FactoredEigenvalue::new(BigRational::new(p.into(), q.into()), j)
    }

    #[test]
    fn bounded_examples() {
        let k = field(3);
        let two = Scalar::from_integer(&k, 2);
        assert_eq!(resonance_exists_bounded(std::slice::from_ref(&two), 10), None);
        assert_eq!(
            resonance_exists_bounded(&[Scalar::root_of_unity(&k, 1)], 3),
            Some(vec![3])
        );
        let half = Scalar::rational(&k, 1, 2).unwrap();
        assert_eq!(resonance_exists_bounded(&[two, half], 2), Some(vec![1, 1]));
        assert_eq!(resonance_exists_bounded(&[], 5), None);
    }

    #[test]
    fn structured_examples() {
        let k1 = field(1);
        assert_eq!(
            resonance_exists_structured(&k1, &[fe(2, 1, 0), fe(1, 1, 0)]).unwrap(),
            Some(vec![0, 1])
        );
        assert_eq!(
            resonance_exists_structured(&k1, &[fe(2, 1, 0), fe(1, 2, 0)]).unwrap(),
            Some(vec![1, 1])
        );
        let k3 = field(3);
        assert_eq!(
            resonance_exists_structured(&k3, &[fe(1, 1, 1), fe(1, 1, 2)]).unwrap(),
            Some(vec![1, 1])
        );
        assert_eq!(
            resonance_exists_structured(&k3, &[fe(2, 1, 1), fe(3, 1, 0)]).unwrap(),
            None
        );
        assert!(resonance_exists_structured(&k3, &[fe(-1, 1, 0)]).is_err());
    }

    #[test]
    fn structured_needs_congruence_scaling() {
        // 2ζ_5 · (1/2) : rational parts cancel at (1,1) but ζ_5 needs five copies
        let k = field(5);
        assert_eq!(
            resonance_exists_structured(&k, &[fe(2, 1, 1), fe(1, 2, 0)]).unwrap(),
            Some(vec![5, 5])
        );
    }

    #[test]
    fn compositions_ascend() {
        let mut seen = Vec::new();
        let _ = for_each_composition::<()>(2, 2, &mut |v| {
            seen.push(v.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(seen, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }
}
