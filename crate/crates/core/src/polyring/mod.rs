//! Sparse polynomials in `x_1, …, x_n` over Q(ζ_N).

mod display;
mod monomial;
mod parser;

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

pub use monomial::{monomials_of_degree, monomials_up_to, GradedSlice, Monomial};
pub use parser::{parse_polynomial, parse_scalar};

use crate::scalar::{Conductor, Scalar};

/// A finite map from monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Arc<Conductor>,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(field: &Arc<Conductor>, nvars: usize) -> Polynomial {
        Polynomial {
            field: Arc::clone(field),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &Arc<Conductor>, nvars: usize) -> Polynomial {
        Polynomial::constant(Scalar::one(field), nvars)
    }

    pub fn constant(c: Scalar, nvars: usize) -> Polynomial {
        Polynomial::term(c, Monomial::one(nvars))
    }

    /// The variable `x_{i+1}` (0-based index).
    pub fn var(field: &Arc<Conductor>, nvars: usize, i: usize) -> Polynomial {
        Polynomial::term(Scalar::one(field), Monomial::var(nvars, i))
    }

    pub fn term(c: Scalar, m: Monomial) -> Polynomial {
        let field = Arc::clone(c.field());
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { field, nvars, terms }
    }

    pub fn monomial(field: &Arc<Conductor>, m: Monomial) -> Polynomial {
        Polynomial::term(Scalar::one(field), m)
    }

    /// Sums the given terms, merging repeated monomials.
    pub fn from_terms(
        field: &Arc<Conductor>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Polynomial {
        let mut p = Polynomial::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn field(&self) -> &Arc<Conductor> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn coeff_or_zero(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(&self.field))
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff_or_zero(&Monomial::one(self.nvars))
    }

    /// Largest monomial with its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    /// Smallest degree of a term; `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Polynomial) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), &(c * a));
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.field, self.nvars);
        }
        Polynomial {
            field: Arc::clone(&self.field),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by a monomial; `None` on exponent overflow.
    pub fn checked_mul_monomial(&self, mono: &Monomial) -> Option<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| Some((m.checked_mul(mono)?, a.clone())))
            .collect::<Option<BTreeMap<_, _>>>()?;
        Some(Polynomial {
            field: Arc::clone(&self.field),
            nvars: self.nvars,
            terms,
        })
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Polynomial {
        self.checked_mul_monomial(mono).expect("monomial exponent overflow")
    }

    /// Product; `None` on exponent overflow.
    pub fn checked_mul(&self, other: &Polynomial) -> Option<Polynomial> {
        let mut out = Polynomial::zero(&self.field, self.nvars);
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (m, a) in &small.terms {
            for (n, b) in &big.terms {
                out.add_term(m.checked_mul(n)?, &(a * b));
            }
        }
        Some(out)
    }

    /// Power by repeated squaring; `None` on exponent overflow.
    pub fn checked_pow(&self, mut k: u32) -> Option<Polynomial> {
        if self.len() == 1 {
            let (m, c) = self.leading().expect("nonempty");
            return Some(Polynomial::term(c.pow(k as u64), m.checked_pow(k)?));
        }
        let mut acc = Polynomial::one(&self.field, self.nvars);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Some(acc)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        self.checked_pow(k).expect("monomial exponent overflow")
    }

    /// The ring map `x_i ↦ images[i]` applied to `self`.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target_vars = images.first().map_or(self.nvars, Polynomial::nvars);
        let mut cache: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|_| vec![Polynomial::one(&self.field, target_vars)])
            .collect();
        let mut out = Polynomial::zero(&self.field, target_vars);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(c.clone(), target_vars);
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                while powers.len() <= e as usize {
                    let next = powers.last().expect("seeded") * &images[i];
                    powers.push(next);
                }
                t = &t * &powers[e as usize];
            }
            out += &t;
        }
        out
    }

    /// `∂p/∂x_{i+1}` (0-based index).
    pub fn partial_derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            out.add_term(m.lower(i).expect("positive exponent"), &c.scale_int(e as i64));
        }
        out
    }

    /// Sum of the terms of exact degree `d`.
    pub fn homogeneous_component(&self, d: u32) -> Polynomial {
        self.filter_terms(|m| m.degree() == d)
    }

    /// Sum of the terms of degree at most `d`.
    pub fn truncate(&self, d: u32) -> Polynomial {
        self.filter_terms(|m| m.degree() <= d)
    }

    fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            field: Arc::clone(&self.field),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Variables `x_{i+1}` (0-based) that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.exps()[i] > 0))
            .collect()
    }
}

impl std::fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), &-c);
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("monomial exponent overflow")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            field: Arc::clone(&self.field),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(n: u32) -> Arc<Conductor> {
        Conductor::new(n).unwrap()
    }

    fn p(src: &str, n: usize, k: &Arc<Conductor>) -> Polynomial {
        parse_polynomial(src, n, k).unwrap()
    }

    #[test]
    fn binomial_square() {
        let k = field(1);
        let s = p("x1 + x2", 2, &k).pow(2);
        assert_eq!(s, p("x1^2 + 2*x1*x2 + x2^2", 2, &k));
        assert!((&s * &Polynomial::zero(&k, 2)).is_zero());
    }

    #[test]
    fn cube_with_root_of_unity() {
        let k = field(3);
        let z = Scalar::root_of_unity(&k, 1);
        let base = &Polynomial::term(z.clone(), Monomial::var(2, 0)) + &Polynomial::var(&k, 2, 1);
        let cube = base.pow(3);
        // independent expansion: Σ C(3,i) ζ^i x1^i x2^{3-i}
        let mut expect = Polynomial::zero(&k, 2);
        for (i, binom) in [1i64, 3, 3, 1].iter().enumerate() {
            let c = z.pow(i as u64).scale_int(*binom);
            expect.add_term(Monomial::new(vec![i as u32, 3 - i as u32]), &c);
        }
        assert_eq!(cube, expect);
        assert_eq!(cube.coeff_or_zero(&Monomial::new(vec![3, 0])), Scalar::one(&k));
    }

    #[test]
    fn substitution() {
        let k = field(3);
        let swap = [p("x2", 2, &k), p("x1", 2, &k)];
        assert_eq!(p("x1*x2", 2, &k).substitute(&swap), p("x1*x2", 2, &k));
        let lam = Scalar::root_of_unity(&k, 1);
        let img = [p("z*x1 + x2", 2, &k), p("z*x2", 2, &k)];
        let expect = Polynomial::from_terms(
            &k,
            2,
            [
                (Monomial::new(vec![2, 0]), lam.pow(2)),
                (Monomial::new(vec![1, 1]), lam.scale_int(2)),
                (Monomial::new(vec![0, 2]), Scalar::one(&k)),
            ],
        );
        assert_eq!(p("x1^2", 2, &k).substitute(&img), expect);
    }

    #[test]
    fn derivatives_and_components() {
        let k = field(1);
        assert_eq!(p("x1^3", 2, &k).partial_derivative(0), p("3*x1^2", 2, &k));
        assert!(p("x1", 2, &k).partial_derivative(1).is_zero());
        let q = p("x1^2 + x2", 2, &k);
        assert_eq!(q.homogeneous_component(1), p("x2", 2, &k));
        assert!(q.homogeneous_component(5).is_zero());
        assert_eq!(q.degree(), Some(2));
        assert_eq!(Polynomial::zero(&k, 2).degree(), None);
    }
}
