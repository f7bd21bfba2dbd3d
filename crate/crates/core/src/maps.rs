//! Endomorphisms, E-derivations `δ = I − φ`, derivations `D = Σ a_i ∂_i`,
//! automorphisms, and shape classification.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::polyring::{Monomial, Polynomial};
use crate::scalar::{Conductor, Scalar};

/// A ring endomorphism given by the images of the variables.
#[derive(Clone, PartialEq, Eq)]
pub struct Endomorphism {
    images: Vec<Polynomial>,
}

impl Endomorphism {
    pub fn new(images: Vec<Polynomial>) -> Result<Endomorphism> {
        let n = images.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("a map needs at least one variable".into()));
        }
        if let Some(p) = images.iter().find(|p| p.nvars() != n) {
            return Err(Error::ShapeMismatch(format!(
                "image {p} lives in {} variables, expected {n}",
                p.nvars()
            )));
        }
        Ok(Endomorphism { images })
    }

    pub fn identity(field: &Arc<Conductor>, n: usize) -> Endomorphism {
        Endomorphism {
            images: (0..n).map(|i| Polynomial::var(field, n, i)).collect(),
        }
    }

    /// `x_i ↦ Σ_j A_ij x_j + c_i`.
    pub fn affine(a: &Matrix, shift: &[Scalar]) -> Result<Endomorphism> {
        let n = a.nrows();
        if !a.is_square() || shift.len() != n {
            return Err(Error::ShapeMismatch(
                "affine map needs a square matrix and a shift per row".into(),
            ));
        }
        let images = (0..n)
            .map(|i| {
                let mut p = Polynomial::constant(shift[i].clone(), n);
                for j in 0..n {
                    p.add_term(Monomial::var(n, j), a.get(i, j));
                }
                p
            })
            .collect();
        Endomorphism::new(images)
    }

    pub fn linear(a: &Matrix) -> Result<Endomorphism> {
        let zero = vec![Scalar::zero(a.field()); a.nrows()];
        Endomorphism::affine(a, &zero)
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    pub fn field(&self) -> &Arc<Conductor> {
        self.images[0].field()
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        p.substitute(&self.images)
    }

    /// `self ∘ other`, i.e. `p ↦ self(other(p))`.
    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        Endomorphism {
            images: other.images.iter().map(|q| self.apply(q)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Endomorphism::identity(self.field(), self.nvars())
    }

    /// Every image is homogeneous of degree one (or zero).
    pub fn is_linear(&self) -> bool {
        self.images
            .iter()
            .all(|p| p.is_zero() || (p.is_homogeneous() && p.degree() == Some(1)))
    }

    pub fn is_affine(&self) -> bool {
        self.images.iter().all(|p| p.degree().is_none_or(|d| d <= 1))
    }

    /// Matrix `A` with `φ(x_i) = Σ_j A_ij x_j + …`.
    pub fn linear_part(&self) -> Matrix {
        let n = self.nvars();
        let rows = self
            .images
            .iter()
            .map(|p| (0..n).map(|j| p.coeff_or_zero(&Monomial::var(n, j))).collect())
            .collect();
        Matrix::from_rows(self.field(), rows).expect("square by construction")
    }

    pub fn constant_part(&self) -> Vec<Scalar> {
        self.images.iter().map(Polynomial::constant_term).collect()
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Endomorphism{self}")
    }
}

impl Serialize for Endomorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

/// `δ = I − φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EDerivation {
    phi: Endomorphism,
}

impl EDerivation {
    pub fn new(phi: Endomorphism) -> EDerivation {
        EDerivation { phi }
    }

    pub fn phi(&self) -> &Endomorphism {
        &self.phi
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        p - &self.phi.apply(p)
    }
}

/// `D = Σ coeffs[i] ∂_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    coeffs: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(coeffs: Vec<Polynomial>) -> Result<Derivation> {
        // same arity rules as an endomorphism
        Endomorphism::new(coeffs.clone())?;
        Ok(Derivation { coeffs })
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> &Arc<Conductor> {
        self.coeffs[0].field()
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(p.field(), p.nvars());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let dp = p.partial_derivative(i);
            if !dp.is_zero() {
                out += &(a * &dp);
            }
        }
        out
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({a})*d{}", i + 1)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// An invertible endomorphism together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyAutomorphism {
    forward: Endomorphism,
    inverse: Endomorphism,
}

impl PolyAutomorphism {
    /// Checks that both composites fix every variable.
    pub fn new(forward: Endomorphism, inverse: Endomorphism) -> Result<PolyAutomorphism> {
        if forward.nvars() != inverse.nvars() {
            return Err(Error::ShapeMismatch("automorphism halves differ in arity".into()));
        }
        if !forward.compose(&inverse).is_identity() || !inverse.compose(&forward).is_identity() {
            return Err(Error::NotInvertible(format!("{inverse} is not inverse to {forward}")));
        }
        Ok(PolyAutomorphism { forward, inverse })
    }

    pub fn identity(field: &Arc<Conductor>, n: usize) -> PolyAutomorphism {
        let id = Endomorphism::identity(field, n);
        PolyAutomorphism {
            forward: id.clone(),
            inverse: id,
        }
    }

    /// `x ↦ T x + c`, with inverse `x ↦ T⁻¹(x − c)`.
    pub fn affine(t: &Matrix, shift: &[Scalar]) -> Result<PolyAutomorphism> {
        let tinv = t.inverse()?;
        let back: Vec<Scalar> = tinv.mul_vec(shift).into_iter().map(|c| -c).collect();
        PolyAutomorphism::new(Endomorphism::affine(t, shift)?, Endomorphism::affine(&tinv, &back)?)
    }

    /// `x_i ↦ x_i + c_i`.
    pub fn shift(field: &Arc<Conductor>, c: &[Scalar]) -> Result<PolyAutomorphism> {
        PolyAutomorphism::affine(&Matrix::identity(field, c.len()), c)
    }

    /// `x_k ↦ a x_k + c` with `c` free of `x_k`, other variables fixed.
    pub fn elementary(k: usize, a: &Scalar, c: &Polynomial) -> Result<PolyAutomorphism> {
        let n = c.nvars();
        let field = Arc::clone(c.field());
        if c.support_vars().contains(&k) {
            return Err(Error::NotInvertible(format!(
                "elementary map on x{} must not involve x{} in its tail",
                k + 1,
                k + 1
            )));
        }
        let ainv = a
            .inv()
            .map_err(|_| Error::NotInvertible(format!("zero scaling of x{}", k + 1)))?;
        let xk = Polynomial::var(&field, n, k);
        let mut fwd = Endomorphism::identity(&field, n).images;
        let mut back = fwd.clone();
        fwd[k] = &xk.scale(a) + c;
        back[k] = (&xk - c).scale(&ainv);
        PolyAutomorphism::new(Endomorphism::new(fwd)?, Endomorphism::new(back)?)
    }

    pub fn forward(&self) -> &Endomorphism {
        &self.forward
    }

    pub fn inverse(&self) -> &Endomorphism {
        &self.inverse
    }

    pub fn nvars(&self) -> usize {
        self.forward.nvars()
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        self.forward.apply(p)
    }

    pub fn apply_inverse(&self, p: &Polynomial) -> Polynomial {
        self.inverse.apply(p)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PolyAutomorphism) -> PolyAutomorphism {
        PolyAutomorphism {
            forward: self.forward.compose(&other.forward),
            inverse: other.inverse.compose(&self.inverse),
        }
    }

    pub fn invert(&self) -> PolyAutomorphism {
        PolyAutomorphism {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }
}

/// An E-derivation or a derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Map {
    E(EDerivation),
    D(Derivation),
}

impl Map {
    pub fn ederivation(phi: Endomorphism) -> Map {
        Map::E(EDerivation::new(phi))
    }

    pub fn derivation(coeffs: Vec<Polynomial>) -> Result<Map> {
        Ok(Map::D(Derivation::new(coeffs)?))
    }

    /// Parses `n` image (or coefficient) strings.
    pub fn parse(kind: MapKind, sources: &[impl AsRef<str>], field: &Arc<Conductor>) -> Result<Map> {
        let n = sources.len();
        let polys = sources
            .iter()
            .map(|s| crate::polyring::parse_polynomial(s.as_ref(), n, field))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        match kind {
            MapKind::Endomorphism => Ok(Map::ederivation(Endomorphism::new(polys)?)),
            MapKind::Derivation => Map::derivation(polys),
        }
    }

    pub fn kind(&self) -> MapKind {
        match self {
            Map::E(_) => MapKind::Endomorphism,
            Map::D(_) => MapKind::Derivation,
        }
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        match self {
            Map::E(d) => d.apply(p),
            Map::D(d) => d.apply(p),
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Map::E(d) => d.phi.nvars(),
            Map::D(d) => d.nvars(),
        }
    }

    pub fn field(&self) -> &Arc<Conductor> {
        match self {
            Map::E(d) => d.phi.field(),
            Map::D(d) => d.field(),
        }
    }

    /// The defining polynomials: images `φ(x_i)` or coefficients of `∂_i`.
    pub fn defining_polys(&self) -> &[Polynomial] {
        match self {
            Map::E(d) => d.phi.images(),
            Map::D(d) => d.coeffs(),
        }
    }

    /// Maps each homogeneous component `V_e` into itself.
    pub fn is_degree_preserving(&self) -> bool {
        match self {
            Map::E(d) => d.phi.is_linear(),
            Map::D(d) => d
                .coeffs
                .iter()
                .all(|p| p.is_zero() || (p.is_homogeneous() && p.degree() == Some(1))),
        }
    }

    /// Maps each `V_{≤e}` into itself.
    pub fn is_filtered(&self) -> bool {
        self.defining_polys().iter().all(|p| p.degree().is_none_or(|d| d <= 1))
    }

    /// Applies to each variable: `δ(x_i)` or `D(x_i)`.
    pub fn on_variables(&self) -> Vec<Polynomial> {
        let n = self.nvars();
        (0..n)
            .map(|i| self.apply(&Polynomial::var(self.field(), n, i)))
            .collect()
    }
}

impl fmt::Display for Map {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Map::E(d) => write!(f, "I - {}", d.phi),
            Map::D(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Endomorphism,
    Derivation,
}

/// `σ⁻¹ ∘ map ∘ σ`, returned as a map of the same kind.
pub fn conjugate(map: &Map, sigma: &PolyAutomorphism) -> Result<Map> {
    if sigma.nvars() != map.nvars() {
        return Err(Error::ShapeMismatch(format!(
            "automorphism in {} variables, map in {}",
            sigma.nvars(),
            map.nvars()
        )));
    }
    let conj = |f: &dyn Fn(&Polynomial) -> Polynomial| -> Vec<Polynomial> {
        sigma
            .forward
            .images
            .iter()
            .map(|s| sigma.apply_inverse(&f(s)))
            .collect()
    };
    Ok(match map {
        Map::E(d) => Map::ederivation(Endomorphism::new(conj(&|p| d.phi.apply(p)))?),
        Map::D(d) => Map::derivation(conj(&|p| d.apply(p)))?,
    })
}

/// Structural shape of a map, with the parameters the matching result needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapShape {
    /// `φ(x_{2i-1}) = λ_i x_{2i-1} + x_{2i}`, `φ(x_{2i}) = λ_i x_{2i}` for
    /// `i ≤ t`, then `φ(x_s) = μ_s x_s` on the remaining variables.
    JordanPairs {
        pairs: Vec<Scalar>,
        tail: Vec<Scalar>,
    },
    /// `φ(x_i) = λ_i x_i + f_i(x_{i+1}, …, x_n)`.
    Triangular {
        lambdas: Vec<Scalar>,
        tails: Vec<Polynomial>,
    },
    Linear {
        matrix: Matrix,
    },
    Affine {
        matrix: Matrix,
        shift: Vec<Scalar>,
    },
    /// `D = Σ (a_i x_i + b_i) ∂_i` with constants `b_i`.
    DerivationAffine {
        a: Vec<Scalar>,
        b: Vec<Scalar>,
    },
    /// `D = Σ (a_i x_i + b_i(x_1, …, x_{i-1})) ∂_i`.
    DerivationTriangular {
        a: Vec<Scalar>,
        tails: Vec<Polynomial>,
    },
    General {
        map_kind: MapKind,
    },
}

impl MapShape {
    pub fn name(&self) -> &'static str {
        match self {
            MapShape::JordanPairs { .. } => "jordan-pairs",
            MapShape::Triangular { .. } => "triangular",
            MapShape::Linear { .. } => "linear",
            MapShape::Affine { .. } => "affine",
            MapShape::DerivationAffine { .. } => "derivation-affine",
            MapShape::DerivationTriangular { .. } => "derivation-triangular",
            MapShape::General { .. } => "general",
        }
    }

    /// Rebuilds the map from the extracted parameters. `general` carries no
    /// parameters, so it needs the original.
    pub fn rebuild(&self, field: &Arc<Conductor>, original: &Map) -> Result<Map> {
        let diag_images = |lams: &[Scalar], tails: Option<&[Polynomial]>| {
            let n = lams.len();
            (0..n)
                .map(|i| {
                    let mut p = Polynomial::term(lams[i].clone(), Monomial::var(n, i));
                    if let Some(t) = tails {
                        p += &t[i];
                    }
                    p
                })
                .collect::<Vec<_>>()
        };
        match self {
            MapShape::JordanPairs { pairs, tail } => {
                let n = 2 * pairs.len() + tail.len();
                let mut images = Vec::with_capacity(n);
                for (i, l) in pairs.iter().enumerate() {
                    let a = Polynomial::term(l.clone(), Monomial::var(n, 2 * i));
                    let b = Polynomial::term(l.clone(), Monomial::var(n, 2 * i + 1));
                    images.push(&a + &Polynomial::var(field, n, 2 * i + 1));
                    images.push(b);
                }
                for (s, m) in tail.iter().enumerate() {
                    images.push(Polynomial::term(m.clone(), Monomial::var(n, 2 * pairs.len() + s)));
                }
                Ok(Map::ederivation(Endomorphism::new(images)?))
            }
            MapShape::Triangular { lambdas, tails } => {
                Ok(Map::ederivation(Endomorphism::new(diag_images(lambdas, Some(tails)))?))
            }
            MapShape::Linear { matrix } => Ok(Map::ederivation(Endomorphism::linear(matrix)?)),
            MapShape::Affine { matrix, shift } => Ok(Map::ederivation(Endomorphism::affine(matrix, shift)?)),
            MapShape::DerivationAffine { a, b } => {
                let n = a.len();
                let tails: Vec<Polynomial> = b.iter().map(|c| Polynomial::constant(c.clone(), n)).collect();
                Map::derivation(diag_images(a, Some(&tails)))
            }
            MapShape::DerivationTriangular { a, tails } => Map::derivation(diag_images(a, Some(tails))),
            MapShape::General { .. } => Ok(original.clone()),
        }
    }
}

/// Splits `p` into the coefficient of `x_i` and the remainder.
fn split_diagonal(p: &Polynomial, i: usize) -> (Scalar, Polynomial) {
    let n = p.nvars();
    let xi = Monomial::var(n, i);
    let lam = p.coeff_or_zero(&xi);
    let mut rest = p.clone();
    rest.add_term(xi, &-&lam);
    (lam, rest)
}

/// Most specific matching shape; syntactic, in the given coordinates.
///
/// Endomorphisms: jordan-pairs, then triangular, then linear, then affine.
/// Derivations: derivation-affine, then derivation-triangular.
pub fn classify(map: &Map) -> MapShape {
    match map {
        Map::E(d) => classify_endo(&d.phi),
        Map::D(d) => classify_derivation(d),
    }
}

fn classify_endo(phi: &Endomorphism) -> MapShape {
    let n = phi.nvars();
    let images = phi.images();
    let field = phi.field();

    let pair_at = |i: usize| -> Option<Scalar> {
        if 2 * i + 1 >= n {
            return None;
        }
        let (l, rest) = split_diagonal(&images[2 * i], 2 * i);
        let (l2, rest2) = split_diagonal(&images[2 * i + 1], 2 * i + 1);
        (l == l2 && rest == Polynomial::var(field, n, 2 * i + 1) && rest2.is_zero()).then_some(l)
    };
    let mut pairs = Vec::new();
    while let Some(l) = pair_at(pairs.len()) {
        pairs.push(l);
    }
    if !pairs.is_empty() {
        let tail: Option<Vec<Scalar>> = (2 * pairs.len()..n)
            .map(|s| {
                let (m, rest) = split_diagonal(&images[s], s);
                rest.is_zero().then_some(m)
            })
            .collect();
        if let Some(tail) = tail {
            return MapShape::JordanPairs { pairs, tail };
        }
    }

    let split: Vec<(Scalar, Polynomial)> = images.iter().enumerate().map(|(i, p)| split_diagonal(p, i)).collect();
    if split
        .iter()
        .enumerate()
        .all(|(i, (_, rest))| rest.support_vars().iter().all(|&v| v > i))
    {
        let (lambdas, tails) = split.into_iter().unzip();
        return MapShape::Triangular { lambdas, tails };
    }
    if phi.is_linear() {
        return MapShape::Linear {
            matrix: phi.linear_part(),
        };
    }
    if phi.is_affine() {
        return MapShape::Affine {
            matrix: phi.linear_part(),
            shift: phi.constant_part(),
        };
    }
    MapShape::General {
        map_kind: MapKind::Endomorphism,
    }
}

fn classify_derivation(d: &Derivation) -> MapShape {
    let split: Vec<(Scalar, Polynomial)> = d
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, p)| split_diagonal(p, i))
        .collect();
    if split.iter().all(|(_, rest)| rest.degree().is_none_or(|e| e == 0)) {
        let (a, rest): (Vec<Scalar>, Vec<Polynomial>) = split.into_iter().unzip();
        let b = rest.iter().map(Polynomial::constant_term).collect();
        return MapShape::DerivationAffine { a, b };
    }
    if split
        .iter()
        .enumerate()
        .all(|(i, (_, rest))| rest.support_vars().iter().all(|&v| v < i))
    {
        let (a, tails) = split.into_iter().unzip();
        return MapShape::DerivationTriangular { a, tails };
    }
    MapShape::General {
        map_kind: MapKind::Derivation,
    }
}
