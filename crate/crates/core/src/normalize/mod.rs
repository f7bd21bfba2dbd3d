//! Conjugating automorphisms that bring maps into normal forms.

mod eigen;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{classify, conjugate, Endomorphism, Map, MapShape, PolyAutomorphism};
use crate::matrix::Matrix;
use crate::polyring::{Monomial, Polynomial};
use crate::scalar::{rationally_independent, Conductor, Scalar};

/// `σ` with `conjugate(input, σ) = normalized`, plus how it was built.
#[derive(Debug, Clone, Serialize)]
pub struct NormalizationResult {
    pub sigma: PolyAutomorphism,
    #[serde(serialize_with = "ser_map")]
    pub normalized: Map,
    pub certificate: Certificate,
}

fn ser_map<S: serde::Serializer>(m: &Map, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(m)
}

impl NormalizationResult {
    /// Re-checks `conjugate(input, σ) = normalized` exactly.
    pub fn verify(&self, input: &Map) -> Result<bool> {
        Ok(conjugate(input, &self.sigma)? == self.normalized)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// `σ(x_i) = x_i + c_i`; the normalized tails vanish at the origin.
    Shift { c: Vec<Scalar> },
    /// Diagonal affine cleanup; `contains_one` lists variables with
    /// eigenvalue 1 (or `a_i = 0`) and a nonzero constant, where
    /// `δ(x_i)` (or `D(x_i)`) is a nonzero constant.
    DiagonalAffine {
        lambdas: Vec<Scalar>,
        contains_one: Vec<usize>,
    },
    /// `σ = σ_1 ∘ … ∘ σ_n` with `σ_k(x_k) = a_k x_k + C_k`.
    Linearization {
        a: Vec<Scalar>,
        c: Vec<Polynomial>,
        coefficients: Vec<LinearizationCoefficient>,
        /// Whether `Σ a_i y_i = 0` has no nonzero integral solution.
        rationally_independent: bool,
    },
    /// Linear change of basis `T` followed by a shift.
    AffineDim2 {
        t: Matrix,
        shift: Vec<Scalar>,
        case: Dim2Case,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearizationCoefficient {
    /// 1-based variable index.
    pub k: usize,
    pub exponent: Vec<u32>,
    pub denominator: Scalar,
    pub value: Scalar,
}

/// Terminal case reached by [`normalize_affine_dim2`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum Dim2Case {
    /// `φ̌ = (λ_1 x_1, λ_2 x_2)`.
    Diagonal { lambdas: Vec<Scalar> },
    /// `φ̌ = (λ x_1 + x_2, λ x_2)`.
    Jordan { lambda: Scalar },
    /// `δ̌(x_index) = -μ_index ≠ 0`, so `1 ∈ Im δ`.
    ContainsOne { index: usize },
    /// `φ̌ = (x_1 + x_2 + μ_1, x_2)`; the image is the ideal generated by
    /// `x_2 + μ_1` (normalized) resp. its image under σ (original coordinates).
    PrincipalIdeal {
        generator_normalized: Polynomial,
        generator_original: Polynomial,
    },
}

fn require_e(map: &Map, what: &str) -> Result<()> {
    match map {
        Map::E(_) => Ok(()),
        Map::D(_) => Err(Error::ShapeMismatch(format!("{what} needs an E-derivation"))),
    }
}

fn evaluate_at(p: &Polynomial, point: &[Scalar]) -> Scalar {
    let n = p.nvars();
    let consts: Vec<Polynomial> = point.iter().map(|c| Polynomial::constant(c.clone(), n)).collect();
    p.substitute(&consts).constant_term()
}

/// Removes the constant terms of a triangular `φ(x_i) = λ_i x_i + f_i(x_{i+1}, …)`
/// by `σ(x_i) = x_i + c_i`, `c_i = (λ_i − 1)⁻¹ f_i(−c_{i+1}, …, −c_n)`.
pub fn shift_to_origin(map: &Map) -> Result<NormalizationResult> {
    require_e(map, "shift_to_origin")?;
    let MapShape::Triangular { lambdas, tails } = triangular_view(map)? else {
        unreachable!()
    };
    let field = map.field();
    let n = map.nvars();
    let mut c = vec![Scalar::zero(field); n];
    for i in (0..n).rev() {
        let point: Vec<Scalar> = c.iter().map(|x| -x).collect();
        let v = evaluate_at(&tails[i], &point);
        let lm1 = &lambdas[i] - &Scalar::one(field);
        if lm1.is_zero() {
            if !v.is_zero() {
                return Err(Error::NormalizationImpossible { index: i + 1 });
            }
        } else {
            c[i] = v.try_div(&lm1)?;
        }
    }
    let sigma = PolyAutomorphism::shift(field, &c)?;
    let normalized = conjugate(map, &sigma)?;
    debug_assert!(normalized.defining_polys().iter().all(|p| p.constant_term().is_zero()));
    Ok(NormalizationResult {
        sigma,
        normalized,
        certificate: Certificate::Shift { c },
    })
}

/// Accepts jordan-pair shapes too, since they are triangular.
fn triangular_view(map: &Map) -> Result<MapShape> {
    let n = map.nvars();
    let mut lambdas = Vec::with_capacity(n);
    let mut tails = Vec::with_capacity(n);
    for (i, p) in map.defining_polys().iter().enumerate() {
        let xi = Monomial::var(n, i);
        let l = p.coeff_or_zero(&xi);
        let mut rest = p.clone();
        rest.add_term(xi, &-&l);
        if rest.support_vars().iter().any(|&v| v <= i) {
            return Err(Error::ShapeMismatch(format!(
                "φ(x{}) = {p} is not of the form λ x{} + f(x{}, …, x{n})",
                i + 1,
                i + 1,
                i + 2
            )));
        }
        lambdas.push(l);
        tails.push(rest);
    }
    Ok(MapShape::Triangular { lambdas, tails })
}

/// Diagonal affine cleanup: `φ(x_i) = λ_i x_i + μ_i` or
/// `D = Σ (a_i x_i + b_i) ∂_i`.
///
/// Every variable with `λ_i ≠ 1` (resp. `a_i ≠ 0`) loses its constant; the
/// others are left alone and, when their constant is nonzero, reported in
/// `contains_one`.
pub fn normalize_diagonal_affine(map: &Map) -> Result<NormalizationResult> {
    let field = map.field();
    let n = map.nvars();
    let mismatch = || Error::ShapeMismatch("expected x_i ↦ λ_i x_i + μ_i or D = Σ (a_i x_i + b_i) ∂_i".into());
    let (lambdas, consts) = match map {
        Map::D(_) => match classify(map) {
            MapShape::DerivationAffine { a, b } => (a, b),
            _ => return Err(mismatch()),
        },
        Map::E(_) => {
            let Ok(MapShape::Triangular { lambdas, tails }) = triangular_view(map) else {
                return Err(mismatch());
            };
            if tails.iter().any(|t| t.degree().is_some_and(|d| d > 0)) {
                return Err(mismatch());
            }
            (lambdas, tails.iter().map(Polynomial::constant_term).collect())
        }
    };
    let is_e = matches!(map, Map::E(_));
    let neutral = if is_e { Scalar::one(field) } else { Scalar::zero(field) };
    let mut contains_one = Vec::new();
    let mut t = Matrix::identity(field, n);
    let mut shift = vec![Scalar::zero(field); n];
    for i in 0..n {
        if lambdas[i] == neutral {
            if !consts[i].is_zero() {
                contains_one.push(i + 1);
            }
            continue;
        }
        if is_e {
            // σ_i(x_i) = x_i + (λ_i − 1)⁻¹ μ_i
            shift[i] = consts[i].try_div(&(&lambdas[i] - &neutral))?;
        } else {
            // σ_i(x_i) = a_i x_i + b_i
            t.set(i, i, lambdas[i].clone());
            shift[i] = consts[i].clone();
        }
    }
    let sigma = PolyAutomorphism::affine(&t, &shift)?;
    let normalized = conjugate(map, &sigma)?;
    Ok(NormalizationResult {
        sigma,
        normalized,
        certificate: Certificate::DiagonalAffine { lambdas, contains_one },
    })
}

/// Conjugates `D = Σ (a_i x_i + b_i(x_1, …, x_{i-1})) ∂_i` to `Σ a_i x_i ∂_i`.
///
/// Step k solves `a_k C_k − Σ_{i<k} a_i x_i ∂C_k/∂x_i = a_k b_k` coefficient
/// by coefficient, where `b_k` is read off the current conjugate; a vanishing
/// `a_k − Σ l_i a_i` at an occurring exponent `l` is a resonant obstruction.
pub fn linearize_triangular_derivation(map: &Map) -> Result<NormalizationResult> {
    let Map::D(d) = map else {
        return Err(Error::ShapeMismatch("linearization needs a derivation".into()));
    };
    let field = map.field();
    let n = map.nvars();
    let a: Vec<Scalar> = (0..n)
        .map(|i| d.coeffs()[i].coeff_or_zero(&Monomial::var(n, i)))
        .collect();
    for (i, p) in d.coeffs().iter().enumerate() {
        let mut rest = p.clone();
        rest.add_term(Monomial::var(n, i), &-&a[i]);
        if rest.support_vars().iter().any(|&v| v >= i) {
            return Err(Error::ShapeMismatch(format!(
                "D(x{}) = {p} is not of the form a x{} + b(x1, …, x{})",
                i + 1,
                i + 1,
                i
            )));
        }
    }
    if let Some(i) = a.iter().position(Scalar::is_zero) {
        return Err(Error::RejectedInput(format!("linearization needs a_{} ≠ 0", i + 1)));
    }

    let mut current = map.clone();
    let mut sigma = PolyAutomorphism::identity(field, n);
    let mut c_polys = Vec::with_capacity(n);
    let mut coefficients = Vec::new();
    for k in 0..n {
        let xk = Polynomial::var(field, n, k);
        let b = &current.defining_polys()[k] - &xk.scale(&a[k]);
        let mut ck = Polynomial::zero(field, n);
        for (m, coeff) in b.terms() {
            let mut denom = a[k].clone();
            for (i, &l) in m.exps()[..k].iter().enumerate() {
                denom -= &a[i].scale_int(l as i64);
            }
            if denom.is_zero() {
                return Err(Error::ResonantObstruction {
                    k: k + 1,
                    exponent: m.exps()[..k].to_vec(),
                });
            }
            let value = &(&a[k] * coeff) * &denom.inv()?;
            coefficients.push(LinearizationCoefficient {
                k: k + 1,
                exponent: m.exps()[..k].to_vec(),
                denominator: denom,
                value: value.clone(),
            });
            ck.add_term(m.clone(), &value);
        }
        let step = PolyAutomorphism::elementary(k, &a[k], &ck)?;
        current = conjugate(&current, &step)?;
        debug_assert_eq!(current.defining_polys()[k], xk.scale(&a[k]));
        sigma = sigma.compose(&step);
        c_polys.push(ck);
    }
    Ok(NormalizationResult {
        sigma,
        normalized: current,
        certificate: Certificate::Linearization {
            rationally_independent: rationally_independent(&a),
            a,
            c: c_polys,
            coefficients,
        },
    })
}

/// `T` with `T⁻¹ A T` upper triangular.
#[derive(Debug, Clone, Serialize)]
pub struct Triangularization {
    pub t: Matrix,
    pub upper: Matrix,
    pub eigenvalues: Vec<Scalar>,
}

/// Triangularizes an `n × n` matrix, `n ≤ 3`, over Q(ζ_N).
///
/// Eigenvalues come from the characteristic polynomial: roots `q·ζ^j` via
/// the rational root theorem applied coordinatewise, quadratic factors via
/// a square-root search, repeated roots via `gcd(χ, χ')`.
pub fn triangularize_linear_part(a: &Matrix) -> Result<Triangularization> {
    if !a.is_square() || a.nrows() > 3 || a.nrows() == 0 {
        return Err(Error::ShapeMismatch(format!(
            "triangularization supports square matrices of size 1 to 3, got {}×{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let field = a.field();
    let n = a.nrows();
    if a.is_upper_triangular() {
        return Ok(Triangularization {
            t: Matrix::identity(field, n),
            upper: a.clone(),
            eigenvalues: a.diagonal(),
        });
    }
    let eigenvalues = eigen::roots(&a.charpoly(), field)?;
    let t = schur_basis(a, &eigenvalues)?;
    let upper = t.inverse()?.mul(a).mul(&t);
    debug_assert!(upper.is_upper_triangular());
    Ok(Triangularization {
        eigenvalues: upper.diagonal(),
        t,
        upper,
    })
}

/// Eigenvector of the first eigenvalue, completed by standard basis vectors,
/// then the same on the trailing block.
fn schur_basis(a: &Matrix, eigenvalues: &[Scalar]) -> Result<Matrix> {
    let field = a.field();
    let n = a.nrows();
    if n == 1 {
        return Ok(Matrix::identity(field, 1));
    }
    let lam = &eigenvalues[0];
    let shifted = a.sub(&Matrix::identity(field, n).scale(lam));
    let v = shifted
        .nullspace()
        .into_iter()
        .next()
        .ok_or_else(|| Error::UnsupportedField(format!("{lam} is not an eigenvalue")))?;
    let mut cols = vec![v];
    for j in 0..n {
        if cols.len() == n {
            break;
        }
        let mut e = vec![Scalar::zero(field); n];
        e[j] = Scalar::one(field);
        let mut trial = cols.clone();
        trial.push(e);
        if columns_matrix(field, &trial).rank() == trial.len() {
            cols = trial;
        }
    }
    let p = columns_matrix(field, &cols);
    let b = p.inverse()?.mul(a).mul(&p);
    let block_rows: Vec<Vec<Scalar>> = (1..n).map(|i| b.rows()[i][1..].to_vec()).collect();
    let block = Matrix::from_rows(field, block_rows)?;
    let inner = schur_basis(&block, &eigenvalues[1..])?;
    let mut lift = Matrix::identity(field, n);
    for i in 1..n {
        for j in 1..n {
            lift.set(i, j, inner.get(i - 1, j - 1).clone());
        }
    }
    Ok(p.mul(&lift))
}

fn columns_matrix(field: &Arc<Conductor>, cols: &[Vec<Scalar>]) -> Matrix {
    let n = cols[0].len();
    let rows = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    Matrix::from_rows(field, rows).expect("rectangular")
}

/// Brings an affine `φ` on two variables to one of the terminal cases:
/// diagonal, Jordan, `1 ∈ Im δ`, or the principal ideal `(x_2 + μ_1)`.
pub fn normalize_affine_dim2(map: &Map) -> Result<NormalizationResult> {
    require_e(map, "normalize_affine_dim2")?;
    let Map::E(d) = map else { unreachable!() };
    let phi = d.phi();
    if phi.nvars() != 2 || !phi.is_affine() {
        return Err(Error::ShapeMismatch(
            "normalize_affine_dim2 needs an affine map in two variables".into(),
        ));
    }
    let field = map.field();
    let tri = triangularize_linear_part(&phi.linear_part())?;
    let (l1, l2) = (tri.upper.get(0, 0).clone(), tri.upper.get(1, 1).clone());
    let u = tri.upper.get(0, 1).clone();
    let one = Scalar::one(field);
    let zero = Scalar::zero(field);
    let fix = if u.is_zero() {
        Matrix::identity(field, 2)
    } else if l1 != l2 {
        Matrix::from_rows(
            field,
            vec![
                vec![one.clone(), u.try_div(&(&l2 - &l1))?],
                vec![zero.clone(), one.clone()],
            ],
        )?
    } else {
        Matrix::from_rows(
            field,
            vec![vec![one.clone(), zero.clone()], vec![zero.clone(), u.inv()?]],
        )?
    };
    let t = tri.t.mul(&fix);
    // σ(x) = S x conjugates A to S A S⁻¹, so S = T⁻¹ gives T⁻¹ A T
    let linear = PolyAutomorphism::affine(&t.inverse()?, &[zero.clone(), zero.clone()])?;
    let stage = conjugate(map, &linear)?;
    let Map::E(sd) = &stage else { unreachable!() };
    let a2 = sd.phi().linear_part();
    let mu = sd.phi().constant_part();
    let jordan = !a2.get(0, 1).is_zero();

    let mut shift = vec![zero.clone(), zero.clone()];
    let case;
    if !jordan {
        let lambdas = a2.diagonal();
        let mut contains = None;
        for i in 0..2 {
            if lambdas[i] == one {
                if !mu[i].is_zero() && contains.is_none() {
                    contains = Some(i + 1);
                }
            } else {
                shift[i] = mu[i].try_div(&(&lambdas[i] - &one))?;
            }
        }
        case = match contains {
            Some(index) => Dim2Case::ContainsOne { index },
            None => Dim2Case::Diagonal { lambdas },
        };
    } else {
        let lambda = a2.get(0, 0).clone();
        if lambda != one {
            // Lemma-2.2 back-substitution for (λx_1 + x_2 + μ_1, λx_2 + μ_2)
            let lm1 = &lambda - &one;
            shift[1] = mu[1].try_div(&lm1)?;
            shift[0] = (&mu[0] - &shift[1]).try_div(&lm1)?;
            case = Dim2Case::Jordan { lambda };
        } else if !mu[1].is_zero() {
            case = Dim2Case::ContainsOne { index: 2 };
        } else {
            let g = &Polynomial::var(field, 2, 1) + &Polynomial::constant(mu[0].clone(), 2);
            case = Dim2Case::PrincipalIdeal {
                generator_original: Polynomial::zero(field, 2),
                generator_normalized: g,
            };
        }
    }
    let sigma = linear.compose(&PolyAutomorphism::shift(field, &shift)?);
    let normalized = conjugate(map, &sigma)?;
    let case = match case {
        Dim2Case::PrincipalIdeal {
            generator_normalized, ..
        } => Dim2Case::PrincipalIdeal {
            generator_original: sigma.apply(&generator_normalized),
            generator_normalized,
        },
        other => other,
    };
    Ok(NormalizationResult {
        sigma,
        normalized,
        certificate: Certificate::AffineDim2 { t, shift, case },
    })
}

/// Convenience: the E-derivation `x ↦ A x + c`.
pub fn affine_map(a: &Matrix, c: &[Scalar]) -> Result<Map> {
    Ok(Map::ederivation(Endomorphism::affine(a, c)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::MapKind;

    fn k(n: u32) -> Arc<Conductor> {
        Conductor::new(n).unwrap()
    }

    fn endo(src: &[&str], f: &Arc<Conductor>) -> Map {
        Map::parse(MapKind::Endomorphism, src, f).unwrap()
    }

    fn der(src: &[&str], f: &Arc<Conductor>) -> Map {
        Map::parse(MapKind::Derivation, src, f).unwrap()
    }

    #[test]
    fn shift_examples() {
        let f = k(1);
        let m = endo(&["2*x1 + x2 + 5", "2*x2 + 3"], &f);
        let r = shift_to_origin(&m).unwrap();
        assert_eq!(
            r.certificate,
            Certificate::Shift {
                c: vec![Scalar::from_integer(&f, 2), Scalar::from_integer(&f, 3)]
            }
        );
        assert!(r.verify(&m).unwrap());
        assert_eq!(r.normalized, endo(&["2*x1 + x2", "2*x2"], &f));

        let clean = endo(&["3*x1 + x2^2", "2*x2"], &f);
        let r = shift_to_origin(&clean).unwrap();
        assert_eq!(r.sigma, PolyAutomorphism::identity(&f, 2));

        let stuck = endo(&["x1 + 1", "2*x2"], &f);
        assert!(matches!(
            shift_to_origin(&stuck),
            Err(Error::NormalizationImpossible { index: 1 })
        ));
    }

    #[test]
    fn one_variable_shift() {
        let f = k(3);
        let m = endo(&["z*x1 + 4"], &f);
        let r = shift_to_origin(&m).unwrap();
        assert_eq!(r.normalized, endo(&["z*x1"], &f));
        let lam = Scalar::root_of_unity(&f, 1);
        let expect = Scalar::from_integer(&f, 4).try_div(&(&lam - &Scalar::one(&f))).unwrap();
        assert_eq!(r.certificate, Certificate::Shift { c: vec![expect] });
    }

    #[test]
    fn linearization_examples() {
        let f = k(1);
        let m = der(&["x1", "3*x2 + x1^2"], &f);
        let r = linearize_triangular_derivation(&m).unwrap();
        assert_eq!(r.normalized, der(&["x1", "3*x2"], &f));
        let sigma_x2 = r.sigma.forward().images()[1].clone();
        assert_eq!(sigma_x2, crate::parse_polynomial("3*x2 + 3*x1^2", 2, &f).unwrap());
        assert!(r.verify(&m).unwrap());

        let resonant = der(&["x1", "2*x2 + x1^2"], &f);
        assert!(matches!(
            linearize_triangular_derivation(&resonant),
            Err(Error::ResonantObstruction { k: 2, ref exponent }) if exponent == &vec![2]
        ));

        let diag = der(&["x1", "2*x2", "3*x3"], &f);
        let r = linearize_triangular_derivation(&diag).unwrap();
        assert_eq!(r.normalized, diag);
    }

    #[test]
    fn triangularization() {
        let f = k(4);
        let a = Matrix::from_ints(&f, &[&[0, -1], &[1, 0]]).unwrap();
        let tri = triangularize_linear_part(&a).unwrap();
        assert!(tri.upper.is_upper_triangular());
        assert_eq!(a.mul(&tri.t), tri.t.mul(&tri.upper));
        assert!(!tri.t.determinant().is_zero());

        let j = Matrix::from_ints(&f, &[&[2, 1], &[0, 2]]).unwrap();
        let tri = triangularize_linear_part(&j).unwrap();
        assert_eq!(tri.t, Matrix::identity(&f, 2));
        assert_eq!(tri.eigenvalues, vec![Scalar::from_integer(&f, 2); 2]);

        let b = Matrix::from_ints(&f, &[&[1, 2, 0], &[3, 1, 1], &[0, 0, 4]]).unwrap();
        let r = triangularize_linear_part(&b);
        // eigenvalues 1 ± √6 are outside Q(i)
        assert!(matches!(r, Err(Error::UnsupportedField(_))));

        let c = Matrix::from_ints(&f, &[&[2, 0, 0], &[1, 3, 0], &[4, 1, 5]]).unwrap();
        let tri = triangularize_linear_part(&c).unwrap();
        assert!(tri.upper.is_upper_triangular());
        assert_eq!(c.mul(&tri.t), tri.t.mul(&tri.upper));
    }

    #[test]
    fn affine_dim2_cases() {
        let f = k(1);
        let m = endo(&["x1 + x2", "x2 + 1"], &f);
        let r = normalize_affine_dim2(&m).unwrap();
        let Certificate::AffineDim2 { case, .. } = &r.certificate else {
            panic!()
        };
        assert_eq!(*case, Dim2Case::ContainsOne { index: 2 });

        let m = endo(&["x1 + x2 + 1", "x2"], &f);
        let r = normalize_affine_dim2(&m).unwrap();
        let Certificate::AffineDim2 { case, .. } = &r.certificate else {
            panic!()
        };
        let Dim2Case::PrincipalIdeal { generator_original, .. } = case else {
            panic!("{case:?}")
        };
        assert_eq!(*generator_original, crate::parse_polynomial("x2 + 1", 2, &f).unwrap());

        let m = endo(&["2*x1", "3*x2"], &f);
        let r = normalize_affine_dim2(&m).unwrap();
        assert_eq!(r.sigma, PolyAutomorphism::identity(&f, 2));
        let Certificate::AffineDim2 { case, .. } = &r.certificate else {
            panic!()
        };
        assert!(matches!(case, Dim2Case::Diagonal { .. }));

        // non-triangular linear part with distinct eigenvalues 1 and 3
        let m = endo(&["2*x1 + x2 + 1", "x1 + 2*x2 + 1"], &f);
        let r = normalize_affine_dim2(&m).unwrap();
        assert!(r.verify(&m).unwrap());
        assert!(r
            .normalized
            .defining_polys()
            .iter()
            .all(|p| p.len() == 1 || p.is_zero()));
    }

    #[test]
    fn diagonal_affine() {
        let f = k(1);
        let m = endo(&["2*x1 + 3", "x2 + 1", "x3"], &f);
        let r = normalize_diagonal_affine(&m).unwrap();
        assert!(r.verify(&m).unwrap());
        assert_eq!(
            r.certificate,
            Certificate::DiagonalAffine {
                lambdas: vec![Scalar::from_integer(&f, 2), Scalar::one(&f), Scalar::one(&f)],
                contains_one: vec![2]
            }
        );
        let d = der(&["2*x1 + 3", "5", "x3 - 1"], &f);
        let r = normalize_diagonal_affine(&d).unwrap();
        assert_eq!(r.normalized, der(&["2*x1", "5", "x3"], &f));
    }
}
