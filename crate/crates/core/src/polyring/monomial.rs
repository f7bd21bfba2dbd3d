use std::fmt;

use serde::Serialize;

/// Exponent vector `x_1^{e_1}⋯x_n^{e_n}`.
///
/// The derived order compares total degree first and then exponents
/// lexicographically from `x_1`, which is graded-lex with `x_1 > … > x_n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    /// Panics if the total degree overflows `u32`; see [`Monomial::checked_new`].
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial::checked_new(exps).expect("monomial degree overflow")
    }

    pub fn checked_new(exps: Vec<u32>) -> Option<Monomial> {
        let degree = exps.iter().try_fold(0u32, |acc, &e| acc.checked_add(e))?;
        Some(Monomial { degree, exps })
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial {
            degree: 0,
            exps: vec![0; nvars],
        }
    }

    /// The variable `x_{i+1}` (0-based index).
    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { degree: 1, exps }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(Monomial {
            degree: self.degree.checked_add(other.degree)?,
            exps,
        })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("monomial exponent overflow")
    }

    pub fn checked_pow(&self, k: u32) -> Option<Monomial> {
        let exps = self.exps.iter().map(|e| e.checked_mul(k)).collect::<Option<Vec<_>>>()?;
        Some(Monomial {
            degree: self.degree.checked_mul(k)?,
            exps,
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| Monomial {
            degree: self.degree - other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        })
    }

    /// Lowers the exponent of variable `i` by one, if positive.
    pub fn lower(&self, i: usize) -> Option<Monomial> {
        (self.exps[i] > 0).then(|| {
            let mut m = self.clone();
            m.exps[i] -= 1;
            m.degree -= 1;
            m
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All monomials of exact degree `d` in `n` variables, in descending
/// graded-lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d, &mut vec![0; n], &mut out);
    out
}

/// All monomials of degree at most `d`, in descending graded-lex order.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    (0..=d).rev().flat_map(|e| monomials_of_degree(n, e)).collect()
}

/// The monomial coordinates of a homogeneous component `V_d` or of the
/// filtered piece `V_{≤d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSlice {
    pub degree: u32,
    pub filtered: bool,
    pub monomials: Vec<Monomial>,
}

impl GradedSlice {
    pub fn exact(n: usize, d: u32) -> GradedSlice {
        GradedSlice {
            degree: d,
            filtered: false,
            monomials: monomials_of_degree(n, d),
        }
    }

    pub fn up_to(n: usize, d: u32) -> GradedSlice {
        GradedSlice {
            degree: d,
            filtered: true,
            monomials: monomials_up_to(n, d),
        }
    }

    pub fn dimension(&self) -> usize {
        self.monomials.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn graded_lex_order() {
        assert!(m(&[0, 2]) > m(&[1, 0]));
        assert!(m(&[2, 0]) > m(&[1, 1]));
        assert!(m(&[1, 1]) > m(&[0, 2]));
        assert!(m(&[1, 0, 0]) > m(&[0, 1, 0]));
    }

    #[test]
    fn slices() {
        let s = GradedSlice::exact(2, 2);
        assert_eq!(s.monomials, vec![m(&[2, 0]), m(&[1, 1]), m(&[0, 2])]);
        assert_eq!(GradedSlice::exact(3, 4).dimension(), 15);
        assert_eq!(GradedSlice::up_to(2, 2).dimension(), 6);
        let up = monomials_up_to(3, 3);
        assert!(up.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn division_and_display() {
        assert_eq!(m(&[2, 1]).checked_div(&m(&[1, 1])), Some(m(&[1, 0])));
        assert_eq!(m(&[0, 1]).checked_div(&m(&[1, 0])), None);
        assert_eq!(m(&[2, 1, 0]).to_string(), "x1^2*x2");
        assert_eq!(m(&[0, 0]).to_string(), "1");
        assert_eq!(m(&[u32::MAX, 0]).checked_mul(&m(&[1, 0])), None);
    }
}
