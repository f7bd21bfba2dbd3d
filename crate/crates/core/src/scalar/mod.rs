//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! An element is stored as its coordinate vector in the power basis
//! `1, ζ, …, ζ^{φ(N)-1}`, always reduced modulo the cyclotomic polynomial
//! Φ_N, so equality is plain coordinate comparison. Every session picks one
//! conductor N; all eigenvalues, shifts and coefficients live in that field.

mod qlinalg;
pub mod resonance;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub(crate) use qlinalg::{nullspace, rank};
pub use resonance::{resonance_exists_bounded, resonance_exists_structured, FactoredEigenvalue};

/// The field Q(ζ_N) with its cached cyclotomic polynomial.
#[derive(Debug)]
pub struct Conductor {
    order: u32,
    degree: usize,
    cyclotomic: Vec<BigInt>,
    /// `powers[k]` holds the coordinates of ζ^k, for k up to
    /// `max(N, 2·φ(N) - 1)`.
    powers: Vec<Vec<BigInt>>,
}

impl Conductor {
    /// Returns the shared field for conductor `n`. Φ_n is computed once per
    /// process.
    pub fn new(n: u32) -> Result<Arc<Conductor>> {
        if n == 0 {
            return Err(Error::RejectedInput("conductor must be positive".into()));
        }
        static CACHE: OnceLock<Mutex<BTreeMap<u32, Arc<Conductor>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
        let mut cache = cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(field) = cache.get(&n) {
            return Ok(Arc::clone(field));
        }
        let field = Arc::new(Conductor::build(n));
        cache.insert(n, Arc::clone(&field));
        Ok(field)
    }

    fn build(n: u32) -> Conductor {
        let cyclotomic = cyclotomic_polynomial(n);
        let degree = cyclotomic.len() - 1;
        let table_len = (n as usize).max(2 * degree).max(2);
        let mut powers = Vec::with_capacity(table_len);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..table_len {
            powers.push(cur.clone());
            // multiply by x and reduce the overflow coefficient with Φ_N
            let top = cur.pop().unwrap_or_default();
            cur.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (c, p) in cur.iter_mut().zip(&cyclotomic) {
                    *c -= &top * p;
                }
            }
        }
        Conductor {
            order: n,
            degree,
            cyclotomic,
            powers,
        }
    }

    /// The conductor N.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// φ(N), the dimension of Q(ζ_N) over Q.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of Φ_N, lowest degree first.
    pub fn cyclotomic_poly(&self) -> &[BigInt] {
        &self.cyclotomic
    }

    /// Order of the group of roots of unity in Q(ζ_N): N for even N, 2N for odd N.
    pub fn unity_group_order(&self) -> u32 {
        if self.order.is_multiple_of(2) {
            self.order
        } else {
            2 * self.order
        }
    }
}

impl PartialEq for Conductor {
    fn eq(&self, other: &Conductor) -> bool {
        self.order == other.order
    }
}

impl Eq for Conductor {}

fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    // Φ_n = (x^n - 1) / Π_{d | n, d < n} Φ_d
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &den);
        }
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// An element of Q(ζ_N).
#[derive(Clone)]
pub struct Scalar {
    field: Arc<Conductor>,
    coords: Vec<BigRational>,
}

impl Scalar {
    pub fn zero(field: &Arc<Conductor>) -> Scalar {
        Scalar {
            field: Arc::clone(field),
            coords: vec![BigRational::zero(); field.degree],
        }
    }

    pub fn one(field: &Arc<Conductor>) -> Scalar {
        Scalar::from_integer(field, 1)
    }

    pub fn from_integer(field: &Arc<Conductor>, value: i64) -> Scalar {
        Scalar::from_rational(field, BigRational::from_integer(value.into()))
    }

    pub fn from_rational(field: &Arc<Conductor>, value: BigRational) -> Scalar {
        let mut s = Scalar::zero(field);
        s.coords[0] = value;
        s
    }

    /// The rational `p/q` embedded in the field.
    pub fn rational(field: &Arc<Conductor>, p: i64, q: i64) -> Result<Scalar> {
        if q == 0 {
            return Err(Error::RejectedInput("zero denominator".into()));
        }
        Ok(Scalar::from_rational(field, BigRational::new(p.into(), q.into())))
    }

    /// ζ_N^j, with `j` reduced modulo N.
    pub fn root_of_unity(field: &Arc<Conductor>, j: i64) -> Scalar {
        let k = j.rem_euclid(field.order as i64) as usize;
        Scalar {
            field: Arc::clone(field),
            coords: field.powers[k]
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    /// Builds an element from its power-basis coordinates.
    pub fn from_coords(field: &Arc<Conductor>, coords: Vec<BigRational>) -> Result<Scalar> {
        if coords.len() != field.degree {
            return Err(Error::RejectedInput(format!(
                "expected {} coordinates, got {}",
                field.degree,
                coords.len()
            )));
        }
        Ok(Scalar {
            field: Arc::clone(field),
            coords,
        })
    }

    pub fn field(&self) -> &Arc<Conductor> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    /// Multiplies by an integer.
    pub fn scale_int(&self, k: i64) -> Scalar {
        let k = BigRational::from_integer(k.into());
        self.scale(&k)
    }

    pub fn scale(&self, k: &BigRational) -> Scalar {
        Scalar {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(Scalar::from_rational(&self.field, r.recip()));
        }
        let modulus: Vec<BigRational> = self
            .field
            .cyclotomic
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut coords = qlinalg::inverse_mod(&self.coords, &modulus);
        coords.resize(self.field.degree, BigRational::zero());
        Ok(Scalar {
            field: Arc::clone(&self.field),
            coords,
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn powi(&self, e: i64) -> Result<Scalar> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Least `s ≥ 1` with `self^s = 1`, if `self` is a root of unity.
    ///
    /// Every root of unity of Q(ζ_N) has order dividing
    /// [`Conductor::unity_group_order`], so one exponentiation decides the
    /// question and a divisor scan finds the exact order.
    pub fn root_of_unity_order(&self) -> Option<u32> {
        let m = self.field.unity_group_order();
        if !self.pow(m as u64).is_one() {
            return None;
        }
        (1..=m)
            .filter(|s| m.is_multiple_of(*s))
            .find(|&s| self.pow(s as u64).is_one())
    }

    /// Writes the element as `q·ζ_N^j` with `q` a positive rational, if possible.
    pub fn factor_unit_form(&self) -> Option<FactoredEigenvalue> {
        if self.is_zero() {
            return None;
        }
        let n = self.field.order as i64;
        (0..n).find_map(|j| {
            let t = self * &Scalar::root_of_unity(&self.field, -j);
            t.to_rational()
                .filter(|q| q.is_positive())
                .map(|q| FactoredEigenvalue { q, j })
        })
    }

    fn check_field(&self, other: &Scalar) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field.order == other.field.order,
            "scalars from different conductors ({} vs {})",
            self.field.order,
            other.field.order
        );
    }

    fn mul_impl(&self, other: &Scalar) -> Scalar {
        self.check_field(other);
        if let Some(r) = self.to_rational() {
            return other.scale(&r);
        }
        if let Some(r) = other.to_rational() {
            return self.scale(&r);
        }
        let d = self.field.degree;
        let mut wide = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    wide[i + j] += a * b;
                }
            }
        }
        let mut coords: Vec<BigRational> = wide.drain(..d).collect();
        for (k, c) in wide.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (dst, p) in coords.iter_mut().zip(&self.field.powers[d + k]) {
                if !p.is_zero() {
                    *dst += &c * p;
                }
            }
        }
        Scalar {
            field: Arc::clone(&self.field),
            coords,
        }
    }

    /// True when the display form is a single summand with a negative coefficient.
    pub(crate) fn is_negative_monomial(&self) -> bool {
        let mut nonzero = self.coords.iter().filter(|c| !c.is_zero());
        matches!((nonzero.next(), nonzero.next()), (Some(c), None) if c.is_negative())
    }

    /// Number of nonzero power-basis coordinates.
    pub(crate) fn support_len(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).count()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.field.order == other.field.order && self.coords == other.coords
    }
}

impl Eq for Scalar {}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats as `c_0 + c_1*z + c_2*z^2 + …` per the scalar grammar, zero terms omitted.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = if k == 0 {
                fmt_rational(&c.abs())
            } else {
                let z = if k == 1 { "z".to_string() } else { format!("z^{k}") };
                if c.abs().is_one() {
                    z
                } else {
                    format!("{}*{z}", fmt_rational(&c.abs()))
                }
            };
            match (first, c.is_negative()) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar[N={}]({})", self.field.order, self)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        for c in &mut self.coords {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.check_field(rhs);
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.check_field(rhs);
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = self.mul_impl(rhs);
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let mut out = self.clone();
                out.$assign(rhs);
                out
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(mut self, rhs: Scalar) -> Scalar {
                self.$assign(&rhs);
                self
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(mut self, rhs: &Scalar) -> Scalar {
                self.$assign(rhs);
                self
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                let mut out = self.clone();
                out.$assign(&rhs);
                out
            }
        }
    };
}

forward_binop!(Add, add, add_assign);
forward_binop!(Sub, sub, sub_assign);
forward_binop!(Mul, mul, mul_assign);

/// Exact rational square root, if one exists.
pub(crate) fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// Positive divisors of a nonzero integer, ascending.
pub(crate) fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization of a positive integer by trial division.
pub(crate) fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Whether the given elements are linearly independent over Q, i.e. the
/// equation Σ a_i·y_i = 0 has no nonzero integral solution.
pub fn rationally_independent(values: &[Scalar]) -> bool {
    if values.is_empty() {
        return true;
    }
    let rows: Vec<Vec<BigRational>> = values.iter().map(|v| v.coords.clone()).collect();
    rank(&rows) == values.len()
}
