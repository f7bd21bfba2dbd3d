//! Registered claim batteries: each instantiates a hypothesis, validates it,
//! and runs exact degree-truncated checks against the stated conclusion.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    check_prop27, conjecture45_explore, mz_spot_check, radical_scan, triple_jordan, Check, Prop27Status,
    RadicalVerdict, ScanOptions,
};
use crate::error::{Error, Result};
use crate::image::{compare_images, ideal_slice_test, ImageOptions, ImageOracle, MembershipStatus};
use crate::maps::{classify, Endomorphism, Map, MapKind, MapShape};
use crate::matrix::Matrix;
use crate::normalize::{
    linearize_triangular_derivation, normalize_affine_dim2, normalize_diagonal_affine, shift_to_origin,
    triangularize_linear_part, Certificate, Dim2Case,
};
use crate::polyring::{monomials_of_degree, parse_polynomial, parse_scalar, Monomial, Polynomial};
use crate::scalar::resonance::{resonance_exists_bounded, resonance_exists_structured};
use crate::scalar::{rationally_independent, Conductor, Scalar};

/// Claim parameters; every field is optional and falls back to the
/// claim's registered default instance.
#[derive(Debug, Clone, Default)]
pub struct ClaimParams {
    pub conductor: Option<u32>,
    pub degree: Option<u32>,
    pub power: Option<u32>,
    pub multiplier: Option<u32>,
    pub slack: Option<u32>,
    /// Eigenvalues (or derivation coefficients `a_i`) as scalar literals.
    pub lambdas: Vec<String>,
    /// Constant parts `μ_i` (or `b_i`).
    pub shift: Vec<String>,
    pub matrix: Option<Vec<Vec<String>>>,
    pub map: Option<(MapKind, Vec<String>)>,
    /// Number of Jordan pairs, for the mixed pair/diagonal shape.
    pub pairs: Option<usize>,
    pub nvars: Option<usize>,
    /// Run even if the hypotheses fail; the report is marked exploratory.
    pub allow_out_of_hypothesis: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub claim: String,
    pub exploratory: bool,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub passed: bool,
}

type Battery = fn(&mut Run) -> Result<()>;

const CLAIMS: &[(&str, Battery)] = &[
    ("thm2.1", thm21),
    ("prop2.3", prop23),
    ("prop2.4", prop24),
    ("prop2.5", prop25),
    ("prop2.6", prop26),
    ("prop2.7", prop27),
    ("thm3.1.1", thm311),
    ("thm3.1.2", thm312),
    ("thm3.1.3", thm313),
    ("prop3.2", prop32),
    ("cor3.3", cor33),
    ("prop3.4", prop34),
    ("lemma4.1", lemma41),
    ("lemma4.2", lemma42),
    ("prop4.3.1", prop431),
    ("prop4.3.2", prop432),
    ("prop4.4.1", prop441),
    ("prop4.4.2", prop442),
    ("remark4.6", remark46),
    ("conj4.5-explore", conj45),
];

pub fn claim_ids() -> impl Iterator<Item = &'static str> {
    CLAIMS.iter().map(|(id, _)| *id)
}

/// Runs the battery registered under `id`.
pub fn verify_claim(id: &str, params: &ClaimParams) -> Result<ClaimReport> {
    let (id, battery) = CLAIMS
        .iter()
        .find(|(c, _)| *c == id)
        .ok_or_else(|| Error::UnknownClaim(id.to_string()))?;
    let mut run = Run {
        id,
        params,
        exploratory: false,
        parameters: BTreeMap::new(),
        checks: Vec::new(),
        notes: Vec::new(),
    };
    battery(&mut run)?;
    if run.checks.is_empty() {
        return Err(Error::RejectedInput(format!("claim {id} ran no checks")));
    }
    let passed = run.checks.iter().all(|c| c.passed);
    Ok(ClaimReport {
        claim: id.to_string(),
        exploratory: run.exploratory,
        parameters: run.parameters,
        checks: run.checks,
        notes: run.notes,
        passed,
    })
}

struct Run<'a> {
    id: &'static str,
    params: &'a ClaimParams,
    exploratory: bool,
    parameters: BTreeMap<String, String>,
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Run<'_> {
    fn set(&mut self, key: impl Into<String>, value: impl Display) {
        self.parameters.insert(key.into(), value.to_string());
    }

    fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Fails with a hypothesis violation unless overridden.
    fn require(&mut self, ok: bool, reason: impl FnOnce() -> String) -> Result<()> {
        if ok {
            return Ok(());
        }
        let reason = reason();
        if self.params.allow_out_of_hypothesis {
            self.exploratory = true;
            self.notes.push(format!("hypothesis overridden: {reason}"));
            Ok(())
        } else {
            Err(Error::HypothesisViolation {
                claim: self.id.to_string(),
                reason,
            })
        }
    }

    fn field(&mut self, default: u32) -> Result<Arc<Conductor>> {
        let n = self.params.conductor.unwrap_or(default);
        self.set("conductor", n);
        Conductor::new(n)
    }

    fn degree(&mut self, default: u32) -> u32 {
        let d = self.params.degree.unwrap_or(default);
        self.set("degree", d);
        d
    }

    fn power(&mut self, default: u32) -> u32 {
        let m = self.params.power.unwrap_or(default);
        self.set("power", m);
        m
    }

    fn multiplier(&mut self, default: u32) -> u32 {
        let b = self.params.multiplier.unwrap_or(default);
        self.set("multiplier", b);
        b
    }

    fn scalars(
        &mut self,
        key: &str,
        given: &[String],
        field: &Arc<Conductor>,
        defaults: &[&str],
    ) -> Result<Vec<Scalar>> {
        let src: Vec<&str> = if given.is_empty() {
            defaults.to_vec()
        } else {
            given.iter().map(String::as_str).collect()
        };
        let out = src
            .iter()
            .map(|s| parse_scalar(s, field).map_err(Error::from))
            .collect::<Result<Vec<_>>>()?;
        self.set(key, list(&out));
        Ok(out)
    }

    fn lambdas(&mut self, field: &Arc<Conductor>, defaults: &[&str]) -> Result<Vec<Scalar>> {
        let given = self.params.lambdas.clone();
        self.scalars("lambdas", &given, field, defaults)
    }

    fn supplied_map(&mut self, field: &Arc<Conductor>) -> Result<Option<Map>> {
        let Some((kind, src)) = &self.params.map else {
            return Ok(None);
        };
        let map = Map::parse(*kind, src, field)?;
        self.set("map", &map);
        Ok(Some(map))
    }

    fn matrix(&mut self, field: &Arc<Conductor>) -> Result<Option<Matrix>> {
        let Some(rows) = &self.params.matrix else {
            return Ok(None);
        };
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_scalar(s, field).map_err(Error::from)).collect())
            .collect::<Result<Vec<Vec<Scalar>>>>()?;
        Ok(Some(Matrix::from_rows(field, rows)?))
    }
}

fn list<T: Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn graded(map: &Map, d: u32) -> ImageOracle {
    let mut o = ImageOracle::new(
        map,
        ImageOptions {
            slack: None,
            witnesses: false,
        },
    );
    o.ensure(d);
    o
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn status_name(s: MembershipStatus) -> &'static str {
    match s {
        MembershipStatus::In => "in",
        MembershipStatus::NotInCertified => "not-in-certified",
        MembershipStatus::NotFoundWithinSlack => "not-found-within-slack",
    }
}

/// Membership of every monomial of degree `lo..=d` against `expect`.
fn table(name: &str, oracle: &ImageOracle, lo: u32, d: u32, expect: impl Fn(&Monomial) -> bool + Sync) -> Check {
    let n = oracle.map().nvars();
    let field = oracle.map().field();
    let monos: Vec<Monomial> = (lo..=d).flat_map(|e| monomials_of_degree(n, e)).collect();
    let mismatches: Vec<String> = monos
        .par_iter()
        .filter_map(|m| {
            let want = expect(m);
            let got = oracle.member_within(&Polynomial::monomial(field, m.clone())).status;
            let ok = if want {
                got == MembershipStatus::In
            } else {
                got == MembershipStatus::NotInCertified
            };
            (!ok).then(|| {
                format!(
                    "{m}: expected {}, got {}",
                    if want { "in" } else { "not-in-certified" },
                    status_name(got)
                )
            })
        })
        .collect();
    Check::new(
        name,
        mismatches.is_empty(),
        format!(
            "{} monomials of degree {lo}..={d}, {} mismatches",
            monos.len(),
            mismatches.len()
        ),
    )
    .with_counterexample(mismatches.into_iter().next())
}

/// The degree-`e` slices equal the span of the monomials selected by `pred`:
/// every selected monomial is in and the dimensions agree.
fn span(name: &str, oracle: &mut ImageOracle, d: u32, pred: impl Fn(&Monomial) -> bool + Sync) -> Check {
    let n = oracle.map().nvars();
    let mut bad = None;
    for e in 0..=d {
        let want = monomials_of_degree(n, e).iter().filter(|m| pred(m)).count();
        let got = oracle.graded_slice(e).rank();
        if want != got && bad.is_none() {
            bad = Some(format!("degree {e}: slice dimension {got}, predicted {want}"));
        }
    }
    let t = table(name, oracle, 0, d, pred);
    let passed = bad.is_none() && t.passed;
    Check::new(name, passed, format!("dimensions and membership, degrees 0..={d}"))
        .with_counterexample(bad.or(t.counterexample))
}

fn ideal_in_image(name: &str, oracle: &ImageOracle, gens: &[usize], d: u32) -> Check {
    let members = |m: &Monomial| gens.iter().any(|&i| m.exps()[i] > 0);
    let n = oracle.map().nvars();
    let field = oracle.map().field();
    let monos: Vec<Monomial> = (1..=d)
        .flat_map(|e| monomials_of_degree(n, e))
        .filter(|m| members(m))
        .collect();
    let miss = monos.par_iter().find_first(|m| {
        oracle.member_within(&Polynomial::monomial(field, (*m).clone())).status != MembershipStatus::In
    });
    let gen_names: Vec<String> = gens.iter().map(|i| format!("x{}", i + 1)).collect();
    Check::new(
        name,
        miss.is_none(),
        format!(
            "ideal ({}) up to degree {d}: {} monomials",
            gen_names.join(", "),
            monos.len()
        ),
    )
    .with_counterexample(miss.map(ToString::to_string))
}

fn one_not_in(oracle: &ImageOracle) -> Check {
    let one = Polynomial::one(oracle.map().field(), oracle.map().nvars());
    let s = oracle.member_within(&one).status;
    Check::new(
        "one-not-in-image",
        s == MembershipStatus::NotInCertified,
        status_name(s),
    )
}

fn one_in(map: &Map, slack: Option<u32>) -> Check {
    let one = Polynomial::one(map.field(), map.nvars());
    match crate::image::member(map, &one, 0, slack) {
        Ok(v) => {
            let ok = v.status == MembershipStatus::In && v.witness.as_ref().is_some_and(|w| map.apply(w) == one);
            let detail = match &v.witness {
                Some(w) => format!("witness {w}"),
                None => status_name(v.status).to_string(),
            };
            Check::new("one-in-image", ok, detail)
        }
        Err(e) => Check::new("one-in-image", false, e.to_string()),
    }
}

fn mz_check(name: &str, map: &Map, d: u32, m: u32, b: u32, slack: Option<u32>) -> Result<Check> {
    let r = mz_spot_check(
        map,
        d,
        m,
        b,
        ScanOptions {
            slack,
            ..ScanOptions::default()
        },
    )?;
    let first = r
        .violations
        .first()
        .map(|v| format!("b = {}, a = {}, m = {}", v.b, v.a, v.m));
    Ok(Check::new(
        name,
        r.passed,
        format!(
            "{} premise monomials, {} pairs, window [{}, {}]",
            r.premise.len(),
            r.pairs_checked,
            r.window.0,
            r.window.1
        ),
    )
    .with_counterexample(first))
}

fn conjugation_check(ok: bool) -> Check {
    Check::new("conjugation-exact", ok, "conjugate(input, σ) = normalized")
}

/// Multiplicative resonance among the nonzero entries; `exact` unless the
/// values could not be factored as `q·ζ^j`.
fn resonance(lams: &[Scalar]) -> Result<(Option<Vec<u32>>, bool)> {
    let idx: Vec<usize> = (0..lams.len()).filter(|&i| !lams[i].is_zero()).collect();
    let nz: Vec<Scalar> = idx.iter().map(|&i| lams[i].clone()).collect();
    let spread = |v: Vec<u32>| {
        let mut out = vec![0; lams.len()];
        for (k, &i) in idx.iter().enumerate() {
            out[i] = v[k];
        }
        out
    };
    let Some(first) = nz.first() else {
        return Ok((None, true));
    };
    let parts: Option<Vec<_>> = nz.iter().map(Scalar::factor_unit_form).collect();
    if let Some(parts) = parts {
        if let Ok(r) = resonance_exists_structured(first.field(), &parts) {
            return Ok((r.map(spread), true));
        }
    }
    Ok((resonance_exists_bounded(&nz, 8).map(spread), false))
}

fn resonance_reason(claim: &str, lams: &[Scalar], v: &[u32]) -> String {
    let distinct: Vec<&Scalar> = lams.iter().fold(Vec::new(), |mut acc, l| {
        if !acc.contains(&l) {
            acc.push(l);
        }
        acc
    });
    if distinct.len() == 1 && distinct[0].root_of_unity_order().is_some() {
        format!(
            "λ = {} is a root of unity but {claim} requires non-resonance",
            distinct[0]
        )
    } else {
        format!(
            "eigenvalues {} satisfy Π λ_j^i_j = 1 with i = {v:?}, but {claim} requires non-resonance",
            list(lams)
        )
    }
}

fn require_nonresonant(run: &mut Run, lams: &[Scalar]) -> Result<()> {
    let (r, exact) = resonance(lams)?;
    if !exact {
        run.notes.push("resonance checked up to total exponent 8 only".into());
    }
    let id = run.id;
    match r {
        Some(v) => run.require(false, || resonance_reason(id, lams, &v)),
        None => Ok(()),
    }
}

fn var(field: &Arc<Conductor>, n: usize, i: usize) -> Polynomial {
    Polynomial::var(field, n, i)
}

/// Jordan pairs `(λx_{2i-1} + x_{2i}, λx_{2i})` followed by diagonal entries.
fn jordan_pairs(field: &Arc<Conductor>, pairs: &[Scalar], tail: &[Scalar]) -> Result<Map> {
    let n = 2 * pairs.len() + tail.len();
    let mut images = Vec::with_capacity(n);
    for (i, l) in pairs.iter().enumerate() {
        images.push(&var(field, n, 2 * i).scale(l) + &var(field, n, 2 * i + 1));
        images.push(var(field, n, 2 * i + 1).scale(l));
    }
    for (s, l) in tail.iter().enumerate() {
        images.push(var(field, n, 2 * pairs.len() + s).scale(l));
    }
    Ok(Map::ederivation(Endomorphism::new(images)?))
}

/// `(λx_1 + x_2, …, λx_{n-1} + x_n, λx_n)`.
fn jordan_chain(lambda: &Scalar, n: usize) -> Result<Map> {
    let field = lambda.field();
    let images = (0..n)
        .map(|i| {
            let p = var(field, n, i).scale(lambda);
            if i + 1 < n {
                &p + &var(field, n, i + 1)
            } else {
                p
            }
        })
        .collect();
    Ok(Map::ederivation(Endomorphism::new(images)?))
}

fn unity_order(l: &Scalar) -> Option<u32> {
    l.root_of_unity_order()
}

fn upper_bidiagonal(field: &Arc<Conductor>, lams: &[Scalar]) -> Result<Matrix> {
    let n = lams.len();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        lams[i].clone()
                    } else if j == i + 1 {
                        Scalar::one(field)
                    } else {
                        Scalar::zero(field)
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(field, rows)
}

fn eigenvalues(a: &Matrix) -> Result<Vec<Scalar>> {
    if a.is_upper_triangular() {
        Ok(a.diagonal())
    } else {
        Ok(triangularize_linear_part(a)?.eigenvalues)
    }
}

fn prefixed(label: &str, mut c: Check) -> Check {
    if !label.is_empty() {
        c.name = format!("{label}/{}", c.name);
    }
    c
}

fn thm21(run: &mut Run) -> Result<()> {
    let d = run.degree(6);
    let mut instances: Vec<Matrix> = Vec::new();
    let field;
    if let Some(m) = run.supplied_map(&Conductor::new(run.params.conductor.unwrap_or(1))?)? {
        field = Arc::clone(m.field());
        let ok = matches!(&m, Map::E(e) if e.phi().is_linear());
        run.require(ok, || "thm2.1 needs a linear endomorphism".into())?;
        let Map::E(e) = &m else {
            return Err(Error::ShapeMismatch("thm2.1 needs an E-derivation".into()));
        };
        instances.push(e.phi().linear_part());
    } else if run.params.matrix.is_some() {
        field = run.field(1)?;
        instances.push(run.matrix(&field)?.expect("matrix present"));
    } else if !run.params.lambdas.is_empty() {
        field = run.field(1)?;
        let lams = run.lambdas(&field, &[])?;
        let lams = if lams.len() == 1 {
            vec![lams[0].clone(); 2]
        } else {
            lams
        };
        instances.push(upper_bidiagonal(&field, &lams)?);
    } else {
        field = run.field(1)?;
        instances.push(Matrix::from_ints(&field, &[&[2, 1], &[0, 2]])?);
        instances.push(Matrix::from_ints(&field, &[&[2, 1, 0], &[0, 3, 1], &[0, 0, 5]])?);
    }
    let multi = instances.len() > 1;
    for (k, a) in instances.iter().enumerate() {
        let label = if multi { format!("A{}", k + 1) } else { String::new() };
        run.set(
            if multi {
                format!("matrix.{}", k + 1)
            } else {
                "matrix".into()
            },
            a.to_string().replace('\n', "; "),
        );
        let lams = eigenvalues(a)?;
        require_nonresonant(run, &lams)?;
        let map = Map::ederivation(Endomorphism::linear(a)?);
        let oracle = graded(&map, d);
        let n = a.nrows() as u64;
        let short = (1..=d).find(|&e| {
            let dim = oracle_rank(&oracle, e);
            dim as u64 != binomial(u64::from(e) + n - 1, n - 1)
        });
        run.check(prefixed(
            &label,
            Check::new(
                "full-slices",
                short.is_none(),
                format!(
                    "rank of the degree-e slice is C(e+{}, {}) for e = 1..={d}",
                    n - 1,
                    n - 1
                ),
            )
            .with_counterexample(short.map(|e| format!("degree {e}"))),
        ));
        run.check(prefixed(&label, one_not_in(&oracle)));
    }
    let _ = field;
    Ok(())
}

fn oracle_rank(oracle: &ImageOracle, e: u32) -> usize {
    // all monomials of degree e reduce to zero exactly when the slice is full
    let n = oracle.map().nvars();
    let field = oracle.map().field();
    monomials_of_degree(n, e)
        .into_iter()
        .filter(|m| oracle.member_within(&Polynomial::monomial(field, m.clone())).status == MembershipStatus::In)
        .count()
}

fn prop23(run: &mut Run) -> Result<()> {
    let field = run.field(1)?;
    let d = run.degree(3);
    let map = match run.supplied_map(&field)? {
        Some(m) => m,
        None => {
            let src = ["2*x1 + x2*x3 + 1", "3*x2 + x3 - 2", "5*x3 + 4"];
            let m = Map::parse(MapKind::Endomorphism, &src, &field)?;
            run.set("map", &m);
            m
        }
    };
    let MapShape::Triangular { lambdas, .. } = classify(&map) else {
        run.require(false, || "prop2.3 needs a triangular endomorphism".into())?;
        return Err(Error::ShapeMismatch("not triangular".into()));
    };
    require_nonresonant(run, &lambdas)?;
    let res = shift_to_origin(&map)?;
    run.check(conjugation_check(res.verify(&map)?));
    let Map::E(e) = &res.normalized else { unreachable!() };
    let fixed = e.phi().images().iter().all(|p| p.constant_term().is_zero());
    run.check(Check::new(
        "normalized-fixes-origin",
        fixed,
        "every image of the normalized map vanishes at 0, so its image lies in (x1, …, xn)",
    ));
    let slack = run.params.slack;
    let mut oracle = ImageOracle::new(&res.normalized, ImageOptions { slack, witnesses: true });
    run.set("slack", oracle.slack());
    oracle.ensure(d);
    let n = map.nvars();
    let monos: Vec<Monomial> = (1..=d).flat_map(|k| monomials_of_degree(n, k)).collect();
    let miss = monos.iter().find(|m| {
        let q = Polynomial::monomial(&field, (*m).clone());
        let v = oracle.member_within(&q);
        !(v.status == MembershipStatus::In && v.witness.is_some_and(|w| res.normalized.apply(&w) == q))
    });
    run.check(
        Check::new(
            "ideal-in-image",
            miss.is_none(),
            format!("{} monomials of degree 1..={d} with validated witnesses", monos.len()),
        )
        .with_counterexample(miss.map(ToString::to_string)),
    );
    Ok(())
}

/// Shared by the diagonal-affine batteries: `(lambdas, constants)` instances.
fn diagonal_affine(run: &mut Run, kind: MapKind, defaults: &[(u32, &[&str], &[&str])]) -> Result<()> {
    let d = run.degree(2);
    let m = run.power(6);
    let b = run.multiplier(2);
    let mut maps = Vec::new();
    let custom = !run.params.lambdas.is_empty() || run.params.map.is_some();
    if let Some(map) = run.supplied_map(&Conductor::new(run.params.conductor.unwrap_or(1))?)? {
        maps.push(map);
    } else if custom {
        let field = run.field(1)?;
        let lams = run.lambdas(&field, &[])?;
        let given = run.params.shift.clone();
        let zeros: Vec<&str> = vec!["0"; lams.len()];
        let mus = run.scalars("shift", &given, &field, &zeros)?;
        maps.push(affine_diag(kind, &field, &lams, &mus)?);
    } else {
        for (k, (n, lams, mus)) in defaults.iter().enumerate() {
            let field = Conductor::new(*n)?;
            let lams: Vec<Scalar> = lams
                .iter()
                .map(|s| parse_scalar(s, &field))
                .collect::<std::result::Result<_, _>>()?;
            let mus: Vec<Scalar> = mus
                .iter()
                .map(|s| parse_scalar(s, &field))
                .collect::<std::result::Result<_, _>>()?;
            let map = affine_diag(kind, &field, &lams, &mus)?;
            run.set(format!("instance.{}", k + 1), format!("N = {n}: {map}"));
            maps.push(map);
        }
    }
    let multi = maps.len() > 1;
    for (k, map) in maps.iter().enumerate() {
        let label = if multi { format!("I{}", k + 1) } else { String::new() };
        let res = match normalize_diagonal_affine(map) {
            Ok(r) => r,
            Err(Error::ShapeMismatch(why)) => {
                run.require(false, || format!("{} needs a diagonal affine map: {why}", run_id(kind)))?;
                continue;
            }
            Err(e) => return Err(e),
        };
        run.check(prefixed(&label, conjugation_check(res.verify(map)?)));
        let Certificate::DiagonalAffine { lambdas, contains_one } = &res.certificate else {
            unreachable!("diagonal cleanup certificate")
        };
        if contains_one.is_empty() {
            let field = map.field();
            let n = map.nvars();
            let diagonal = res
                .normalized
                .defining_polys()
                .iter()
                .enumerate()
                .all(|(i, p)| *p == var(field, n, i).scale(&lambdas[i]));
            run.check(prefixed(
                &label,
                Check::new("normalized-is-diagonal", diagonal, res.normalized.to_string()),
            ));
            run.check(prefixed(
                &label,
                mz_check("mz-spot-check", &res.normalized, d, m, b, None)?,
            ));
        } else {
            run.notes.push(format!(
                "{}: variables {contains_one:?} give 1 ∈ Im",
                if multi { &label } else { "map" }
            ));
            run.check(prefixed(&label, one_in(map, run.params.slack)));
        }
    }
    Ok(())
}

fn run_id(kind: MapKind) -> &'static str {
    match kind {
        MapKind::Endomorphism => "prop2.4",
        MapKind::Derivation => "prop2.5",
    }
}

fn affine_diag(kind: MapKind, field: &Arc<Conductor>, lams: &[Scalar], mus: &[Scalar]) -> Result<Map> {
    if lams.len() != mus.len() {
        return Err(Error::RejectedInput(format!(
            "{} diagonal entries but {} constants",
            lams.len(),
            mus.len()
        )));
    }
    let n = lams.len();
    let polys: Vec<Polynomial> = (0..n)
        .map(|i| &var(field, n, i).scale(&lams[i]) + &Polynomial::constant(mus[i].clone(), n))
        .collect();
    match kind {
        MapKind::Endomorphism => Ok(Map::ederivation(Endomorphism::new(polys)?)),
        MapKind::Derivation => Map::derivation(polys),
    }
}

fn prop24(run: &mut Run) -> Result<()> {
    diagonal_affine(
        run,
        MapKind::Endomorphism,
        &[(3, &["2", "1", "z"], &["3", "0", "1"]), (1, &["2", "1"], &["1", "5"])],
    )
}

fn prop25(run: &mut Run) -> Result<()> {
    diagonal_affine(
        run,
        MapKind::Derivation,
        &[(1, &["2", "0", "3"], &["1", "0", "-1"]), (1, &["1", "0"], &["2", "5"])],
    )
}

fn prop26(run: &mut Run) -> Result<()> {
    let field = run.field(5)?;
    let d = run.degree(4);
    let map = match run.supplied_map(&field)? {
        Some(m) => m,
        None => {
            let src = ["x1", "z*x2 + x1^2", "z^2*x3 + x1*x2 + x1^3"];
            let m = Map::parse(MapKind::Derivation, &src, &field)?;
            run.set("map", &m);
            m
        }
    };
    let MapShape::DerivationTriangular { a, .. } = classify(&map) else {
        run.require(false, || "prop2.6 needs a triangular derivation".into())?;
        return Err(Error::ShapeMismatch("not a triangular derivation".into()));
    };
    let independent = rationally_independent(&a);
    run.require(independent, || {
        format!(
            "a = {} admits a nonzero integral relation Σ a_i y_i = 0, so S is nonempty",
            list(&a)
        )
    })?;
    let res = linearize_triangular_derivation(&map)?;
    run.check(conjugation_check(res.verify(&map)?));
    let n = map.nvars();
    let target = Map::derivation((0..n).map(|i| var(&field, n, i).scale(&a[i])).collect())?;
    run.check(Check::new(
        "normalized-is-linear-diagonal",
        res.normalized == target,
        res.normalized.to_string(),
    ));
    let gens: Vec<Polynomial> = (0..n).map(|i| var(&field, n, i)).collect();
    let cmp = ideal_slice_test(&res.normalized, &gens, d, None)?;
    run.check(
        Check::new(
            "normalized-image-is-ideal",
            cmp.equal,
            format!("image slices vs (x1, …, xn) up to degree {d}"),
        )
        .with_counterexample(cmp.first_discrepancy.map(|e| format!("degree {e}"))),
    );
    // a resonant control must be rejected
    let k1 = Conductor::new(1)?;
    let control = Map::parse(MapKind::Derivation, &["x1", "2*x2 + x1^2"], &k1)?;
    let rejected = matches!(
        linearize_triangular_derivation(&control),
        Err(Error::ResonantObstruction { k: 2, .. })
    );
    run.check(Check::new(
        "resonant-control-rejected",
        rejected,
        "x1∂1 + (2x2 + x1^2)∂2 has a vanishing denominator at x1^2",
    ));
    Ok(())
}

fn prop27(run: &mut Run) -> Result<()> {
    let d = run.degree(4);
    let m = run.power(6);
    let k3 = Conductor::new(3)?;
    let k1 = Conductor::new(1)?;
    let p = |s: &str, n, k: &Arc<Conductor>| parse_polynomial(s, n, k).map_err(Error::from);
    let positive: Vec<(&str, Map, Vec<Polynomial>)> = vec![
        (
            "jordan-pair-z",
            Map::parse(MapKind::Endomorphism, &["z*x1 + x2", "z*x2"], &k3)?,
            vec![p("x2", 2, &k3)?],
        ),
        (
            "pair-z-diag-2",
            Map::parse(MapKind::Endomorphism, &["z*x1 + x2", "z*x2", "2*x3"], &k3)?,
            vec![p("x2", 3, &k3)?, p("x3", 3, &k3)?],
        ),
        (
            "diag-2-pair-z",
            Map::parse(MapKind::Endomorphism, &["2*x1 + x2", "2*x2", "z*x3"], &k3)?,
            vec![p("x1", 3, &k3)?, p("x2", 3, &k3)?],
        ),
    ];
    for (label, map, gens) in &positive {
        run.set(format!("instance.{label}"), map);
        let r = check_prop27(map, Some(gens), d, m)?;
        run.check(
            Check::new(
                format!("{label}/satisfied-at-bound"),
                r.status == Prop27Status::SatisfiedAtBound,
                format!("candidates {}", list(gens)),
            )
            .with_counterexample(r.witness),
        );
    }
    let zero = Map::parse(MapKind::Endomorphism, &["x1", "x2"], &k1)?;
    let r = check_prop27(&zero, Some(&[p("x1", 2, &k1)?]), d, m)?;
    run.check(Check::new(
        "zero-map/violation-detected",
        r.status == Prop27Status::Violated,
        r.witness.unwrap_or_default(),
    ));
    Ok(())
}

fn jordan_battery(run: &mut Run, pairs: &[Scalar], tail: &[Scalar], map: Option<Map>) -> Result<()> {
    let d = run.degree(6);
    let m = run.power(6);
    let b = run.multiplier(2);
    let field = Arc::clone(pairs.first().or(tail.first()).expect("nonempty").field());
    let map = match map {
        Some(m) => m,
        None => jordan_pairs(&field, pairs, tail)?,
    };
    run.set("map", &map);
    let t = pairs.len();
    // eigenvalue attached to each quotient variable
    let quotient: Vec<(usize, Scalar)> = (0..t)
        .map(|i| (2 * i, pairs[i].clone()))
        .chain(tail.iter().enumerate().map(|(s, l)| (2 * t + s, l.clone())))
        .collect();
    let even: Vec<usize> = (0..t).map(|i| 2 * i + 1).collect();
    let one = Scalar::one(&field);
    let nonresonant = |mono: &Monomial| {
        let mut acc = one.clone();
        for (v, l) in &quotient {
            acc = &acc * &l.pow(u64::from(mono.exps()[*v]));
        }
        !acc.is_one()
    };
    if let Some((i, j)) = cross_pair_relation(pairs, 8) {
        run.notes.push(format!(
            "pairs {} and {} are multiplicatively resonant; the containment of (x2, x4, …) in the image \
             is not expected here, so the ideal-based checks may fail while the MZ check holds",
            i + 1,
            j + 1
        ));
    }
    let mut oracle = graded(&map, d);
    run.check(ideal_in_image("ideal-in-image", &oracle, &even, d));
    let in_ideal = |mono: &Monomial| even.iter().any(|&i| mono.exps()[i] > 0);
    run.check(table("quotient-table", &oracle, 0, d, |mono| {
        // only monomials outside the ideal are informative here
        in_ideal(mono) || nonresonant(mono)
    }));
    run.check(span("image-span", &mut oracle, d, |mono| {
        in_ideal(mono) || nonresonant(mono)
    }));
    run.check(mz_check("mz-spot-check", &map, 2.min(d), m, b, None)?);
    Ok(())
}

/// First pair of Jordan pairs `(i, j)` with `λ_i^a λ_j^b = 1` for some
/// `1 ≤ a, b ≤ bound`.
fn cross_pair_relation(pairs: &[Scalar], bound: u32) -> Option<(usize, usize)> {
    let powers: Vec<Vec<Scalar>> = pairs
        .iter()
        .map(|l| (0..=bound).map(|k| l.pow(u64::from(k))).collect())
        .collect();
    (0..pairs.len())
        .flat_map(|i| (i + 1..pairs.len()).map(move |j| (i, j)))
        .find(|&(i, j)| {
            (1..=bound as usize).any(|a| (1..=bound as usize).any(|b| (&powers[i][a] * &powers[j][b]).is_one()))
        })
}

/// Eigenvalues, tail coefficients and the map itself.
type JordanShape = (Vec<Scalar>, Vec<Scalar>, Map);

fn jordan_shape(run: &mut Run, field: &Arc<Conductor>, expect_tail: Option<usize>) -> Result<Option<JordanShape>> {
    let Some(map) = run.supplied_map(field)? else {
        return Ok(None);
    };
    match classify(&map) {
        MapShape::JordanPairs { pairs, tail } if expect_tail.is_none_or(|k| tail.len() == k) => {
            Ok(Some((pairs, tail, map)))
        }
        other => {
            let id = run.id;
            run.require(false, || {
                format!("{id} needs the Jordan pair shape, got {}", other.name())
            })?;
            Err(Error::ShapeMismatch("Jordan pair shape required".into()))
        }
    }
}

fn thm311(run: &mut Run) -> Result<()> {
    let field = run.field(3)?;
    if let Some((p, t, m)) = jordan_shape(run, &field, Some(0))? {
        return jordan_battery(run, &p, &t, Some(m));
    }
    let pairs = run.lambdas(&field, &["z", "2"])?;
    jordan_battery(run, &pairs, &[], None)
}

fn thm312(run: &mut Run) -> Result<()> {
    let field = run.field(3)?;
    if let Some((p, t, m)) = jordan_shape(run, &field, Some(1))? {
        return jordan_battery(run, &p, &t, Some(m));
    }
    let lams = run.lambdas(&field, &["z", "z"])?;
    if lams.len() < 2 {
        return Err(Error::RejectedInput("thm3.1.2 needs r + 1 ≥ 2 eigenvalues".into()));
    }
    let (pairs, tail) = lams.split_at(lams.len() - 1);
    jordan_battery(run, pairs, tail, None)
}

fn thm313(run: &mut Run) -> Result<()> {
    let field = run.field(3)?;
    if let Some((p, t, m)) = jordan_shape(run, &field, None)? {
        return jordan_battery(run, &p, &t, Some(m));
    }
    let lams = run.lambdas(&field, &["z", "z^2", "2"])?;
    let t = run.params.pairs.unwrap_or(1);
    run.set("pairs", t);
    if t == 0 || t > lams.len() {
        return Err(Error::RejectedInput(format!(
            "need 1 ≤ t ≤ {} Jordan pairs",
            lams.len()
        )));
    }
    let (pairs, tail) = lams.split_at(t);
    jordan_battery(run, pairs, tail, None)
}

fn prop32(run: &mut Run) -> Result<()> {
    let d = run.degree(5);
    let m = run.power(6);
    let b = run.multiplier(2);
    let mut instances: Vec<Map> = Vec::new();
    if let Some(map) = run.supplied_map(&Conductor::new(run.params.conductor.unwrap_or(1))?)? {
        instances.push(map);
    } else if run.params.matrix.is_some() {
        let field = run.field(1)?;
        let a = run.matrix(&field)?.expect("matrix present");
        instances.push(Map::ederivation(Endomorphism::linear(&a)?));
    } else {
        let k4 = Conductor::new(4)?;
        let k1 = Conductor::new(1)?;
        instances.push(Map::ederivation(Endomorphism::linear(&Matrix::from_ints(
            &k4,
            &[&[0, -1], &[1, 0]],
        )?)?));
        instances.push(Map::ederivation(Endomorphism::linear(&Matrix::from_ints(
            &k1,
            &[&[1, 1], &[-1, 3]],
        )?)?));
    }
    let multi = instances.len() > 1;
    for (k, map) in instances.iter().enumerate() {
        let label = if multi { format!("A{}", k + 1) } else { String::new() };
        run.set(
            if multi {
                format!("instance.{}", k + 1)
            } else {
                "map".into()
            },
            map,
        );
        let linear2 = matches!(map, Map::E(e) if e.phi().is_linear() && e.phi().nvars() == 2);
        run.require(linear2, || "prop3.2 needs a linear endomorphism of K[x1, x2]".into())?;
        let res = normalize_affine_dim2(map)?;
        run.check(prefixed(&label, conjugation_check(res.verify(map)?)));
        let Certificate::AffineDim2 { case, .. } = &res.certificate else {
            unreachable!()
        };
        let normal = matches!(case, Dim2Case::Diagonal { .. } | Dim2Case::Jordan { .. });
        run.check(prefixed(
            &label,
            Check::new("normal-form", normal, format!("{}", res.normalized)),
        ));
        // Im δ = σ(Im δ̌) degree by degree
        let mut a = graded(map, d);
        let mut c = graded(&res.normalized, d);
        let mut bad = None;
        for e in 0..=d {
            let moved: Vec<Polynomial> = c.basis_at(e).iter().map(|v| res.sigma.apply(v)).collect();
            let dims = a.basis_at(e).len() == moved.len();
            let inside = moved.iter().all(|v| a.member_within(v).status == MembershipStatus::In);
            if !(dims && inside) && bad.is_none() {
                bad = Some(format!("degree {e}"));
            }
        }
        run.check(prefixed(
            &label,
            Check::new(
                "image-covariance",
                bad.is_none(),
                format!("σ(Im δ̌) = Im δ for degrees ≤ {d}"),
            )
            .with_counterexample(bad),
        ));
        run.check(prefixed(&label, mz_check("mz-spot-check", map, 2, m, b, None)?));
    }
    Ok(())
}

fn cor33(run: &mut Run) -> Result<()> {
    let field = run.field(3)?;
    let d = run.degree(9);
    let m = run.power(6);
    let lams = run.lambdas(&field, &["z"])?;
    let lambda = lams[0].clone();
    let map = jordan_chain(&lambda, 2)?;
    run.set("map", &map);
    let mut oracle = graded(&map, d);
    let Some(s) = unity_order(&lambda) else {
        // not a root of unity: the image is the ideal (x1, x2)
        run.notes.push(format!(
            "λ = {lambda} is not a root of unity; checking the ideal branch"
        ));
        run.check(span("image-is-ideal", &mut oracle, d, |mono| mono.degree() > 0));
        return Ok(());
    };
    run.set("s", s);
    run.check(ideal_in_image("x2-multiples-in-image", &oracle, &[1], d));
    run.check(table("pure-x1-powers", &oracle, 0, d, |mono| {
        mono.exps()[1] > 0 || mono.exps()[0] % s != 0
    }));
    let field2 = Arc::clone(&field);
    let certified: Vec<u32> = (1..=d / s).map(|k| k * s).collect();
    let bad = certified.iter().find(|&&e| {
        let q = Polynomial::monomial(&field2, Monomial::new(vec![e, 0]));
        oracle.member_within(&q).status != MembershipStatus::NotInCertified
    });
    run.check(
        Check::new(
            "certified-exclusions",
            bad.is_none(),
            format!("x1^e certified not in for e ∈ {certified:?}"),
        )
        .with_counterexample(bad.map(|e| format!("x1^{e}"))),
    );
    run.check(span("image-span", &mut oracle, d, |mono| {
        mono.exps()[1] > 0 || mono.exps()[0] % s != 0
    }));
    let rd = d.min(4);
    let scan = radical_scan(&map, rd, m, &[], ScanOptions::default())?;
    let evidence = scan.evidence_monomials();
    let expected: std::collections::BTreeSet<Monomial> = (1..=rd)
        .flat_map(|e| monomials_of_degree(2, e))
        .filter(|mono| mono.exps()[1] > 0)
        .collect();
    let diff = evidence.symmetric_difference(&expected).next().cloned();
    run.check(
        Check::new(
            "radical-evidence-is-(x2)",
            diff.is_none(),
            format!("radical scan d = {rd}, M = {m}"),
        )
        .with_counterexample(diff.map(|m| m.to_string())),
    );
    Ok(())
}

fn prop34(run: &mut Run) -> Result<()> {
    let d = run.degree(4);
    let m = run.power(6);
    let b = run.multiplier(2);
    let mut instances: Vec<(Option<&str>, Map)> = Vec::new();
    if let Some(map) = run.supplied_map(&Conductor::new(run.params.conductor.unwrap_or(1))?)? {
        instances.push((None, map));
    } else {
        let k1 = Conductor::new(1)?;
        for (case, src) in [
            ("principal-ideal", ["x1 + x2 + 1", "x2"]),
            ("contains-one", ["x1 + x2", "x2 + 1"]),
            ("jordan", ["x1 + x2 + 3", "-x1 + 3*x2 - 1"]),
            ("diagonal", ["2*x1 + x2 + 5", "3*x2 + 1"]),
            ("contains-one", ["x1 + 3", "2*x2 + 1"]),
            ("diagonal", ["x1", "2*x2 + 1"]),
        ] {
            instances.push((Some(case), Map::parse(MapKind::Endomorphism, &src, &k1)?));
        }
    }
    let multi = instances.len() > 1;
    for (k, (expected, map)) in instances.iter().enumerate() {
        let label = if multi { format!("I{}", k + 1) } else { String::new() };
        run.set(
            if multi {
                format!("instance.{}", k + 1)
            } else {
                "map".into()
            },
            map,
        );
        let affine2 = matches!(map, Map::E(e) if e.phi().is_affine() && e.phi().nvars() == 2);
        run.require(affine2, || "prop3.4 needs an affine endomorphism of K[x1, x2]".into())?;
        let res = normalize_affine_dim2(map)?;
        run.check(prefixed(&label, conjugation_check(res.verify(map)?)));
        let Certificate::AffineDim2 { case, .. } = &res.certificate else {
            unreachable!()
        };
        let name = match case {
            Dim2Case::Diagonal { .. } => "diagonal",
            Dim2Case::Jordan { .. } => "jordan",
            Dim2Case::ContainsOne { .. } => "contains-one",
            Dim2Case::PrincipalIdeal { .. } => "principal-ideal",
        };
        if let Some(want) = expected {
            run.check(prefixed(
                &label,
                Check::new("terminal-case", name == *want, format!("{name}, expected {want}")),
            ));
        }
        match case {
            Dim2Case::ContainsOne { .. } => run.check(prefixed(&label, one_in(map, run.params.slack))),
            Dim2Case::PrincipalIdeal { generator_original, .. } => {
                let cmp = ideal_slice_test(map, std::slice::from_ref(generator_original), d, run.params.slack)?;
                run.check(prefixed(
                    &label,
                    Check::new(
                        "image-is-principal-ideal",
                        cmp.equal,
                        format!("({generator_original}) up to degree {d}"),
                    )
                    .with_counterexample(cmp.first_discrepancy.map(|e| format!("degree {e}"))),
                ));
            }
            Dim2Case::Diagonal { .. } | Dim2Case::Jordan { .. } => {
                run.check(prefixed(
                    &label,
                    mz_check("mz-spot-check", &res.normalized, 2, m, b, None)?,
                ));
            }
        }
    }
    Ok(())
}

fn lemma41(run: &mut Run) -> Result<()> {
    let field = run.field(12)?;
    let bound = run.power(8);
    let given = run.params.lambdas.clone();
    let values = run.scalars(
        "values",
        &given,
        &field,
        &[
            "1", "-1", "z", "z^2", "z^3", "z^4", "2", "1/2", "2*z", "1/2*z^5", "3", "1/3*z^2", "4", "1/4",
        ],
    )?;
    let powers: Vec<Vec<Scalar>> = values
        .iter()
        .map(|l| (0..=bound).map(|k| l.pow(u64::from(k))).collect())
        .collect();
    let roots: Vec<bool> = values.iter().map(|l| l.root_of_unity_order().is_some()).collect();
    let mut pairs = 0;
    let mut first_ok = true;
    let mut second_ok = true;
    let mut bad1 = None;
    let mut bad2 = None;
    let mut second_cases = 0;
    for i in 0..values.len() {
        for j in 0..values.len() {
            if i == j {
                continue;
            }
            pairs += 1;
            let mut relations: Vec<(u32, u32)> = Vec::new();
            for r1 in 1..=bound {
                for r2 in 1..=bound {
                    if (&powers[i][r1 as usize] * &powers[j][r2 as usize]).is_one() {
                        relations.push((r1, r2));
                    }
                }
            }
            if relations.is_empty() {
                continue;
            }
            if (roots[i] || roots[j]) && !(roots[i] && roots[j]) {
                first_ok = false;
                bad1.get_or_insert(format!("({}, {})", values[i], values[j]));
            }
            let independent = relations
                .iter()
                .any(|a| relations.iter().any(|b| a.0 * b.1 != a.1 * b.0));
            if independent {
                second_cases += 1;
                if !(roots[i] && roots[j]) {
                    second_ok = false;
                    bad2.get_or_insert(format!("({}, {})", values[i], values[j]));
                }
            }
        }
    }
    run.check(
        Check::new(
            "one-root-forces-the-other",
            first_ok,
            format!("{pairs} ordered pairs, exponents 1..={bound}"),
        )
        .with_counterexample(bad1),
    );
    run.check(
        Check::new(
            "two-relations-force-roots",
            second_ok,
            format!("{second_cases} pairs with two non-proportional relations"),
        )
        .with_counterexample(bad2),
    );
    Ok(())
}

fn lemma42(run: &mut Run) -> Result<()> {
    let field = run.field(3)?;
    let d = run.degree(6);
    let n = run.params.nvars.unwrap_or(3);
    run.set("nvars", n);
    if n < 2 {
        return Err(Error::RejectedInput("lemma4.2 needs n ≥ 2".into()));
    }
    let lambda = run.lambdas(&field, &["z"])?[0].clone();
    let s = unity_order(&lambda);
    run.require(s.is_some(), || format!("λ = {lambda} is not a root of unity"))?;
    let s = s.unwrap_or(1);
    let map = jordan_chain(&lambda, n)?;
    run.set("map", &map);
    let oracle = graded(&map, d);
    let field2 = Arc::clone(&field);
    let tail_monos: Vec<Monomial> = (1..=d)
        .flat_map(|e| monomials_of_degree(n, e))
        .filter(|m| m.exps()[..n - 2].iter().all(|&x| x == 0) && m.exps()[n - 1] > 0)
        .collect();
    let miss = tail_monos.iter().find(|m| {
        oracle
            .member_within(&Polynomial::monomial(&field2, (*m).clone()))
            .status
            != MembershipStatus::In
    });
    run.check(
        Check::new(
            "last-two-variables",
            miss.is_none(),
            format!("x{}^a x{}^b with b ≥ 1: {} monomials", n - 1, n, tail_monos.len()),
        )
        .with_counterexample(miss.map(ToString::to_string)),
    );
    let monos: Vec<Monomial> = (1..=d)
        .flat_map(|e| monomials_of_degree(n, e))
        .filter(|m| m.degree() % s != 0)
        .collect();
    let miss = monos.par_iter().find_first(|m| {
        oracle
            .member_within(&Polynomial::monomial(&field2, (*m).clone()))
            .status
            != MembershipStatus::In
    });
    run.check(
        Check::new(
            "non-resonant-degrees",
            miss.is_none(),
            format!("{} monomials with degree not divisible by {s}", monos.len()),
        )
        .with_counterexample(miss.map(ToString::to_string)),
    );
    Ok(())
}

fn prop43(run: &mut Run, root_first: bool) -> Result<()> {
    let field = run.field(3)?;
    let d = run.degree(6);
    let m = run.power(6);
    let defaults: &[&str] = if root_first { &["z", "2"] } else { &["2", "z"] };
    let lams = run.lambdas(&field, defaults)?;
    if lams.len() != 2 {
        return Err(Error::RejectedInput("need two eigenvalues λ1, λ2".into()));
    }
    let (root, other) = if root_first {
        (&lams[0], &lams[1])
    } else {
        (&lams[1], &lams[0])
    };
    let s = unity_order(root);
    let id = run.id;
    run.require(s.is_some() && unity_order(other).is_none(), || {
        format!(
            "{id} needs {} a root of unity and {} not one",
            if root_first { "λ1" } else { "λ2" },
            if root_first { "λ2" } else { "λ1" }
        )
    })?;
    let s = s.unwrap_or(1);
    let map = jordan_pairs(&field, &lams[..1], &lams[1..])?;
    run.set("map", &map);
    let mut oracle = graded(&map, d);
    let pred = |mono: &Monomial| {
        let e = mono.exps();
        if root_first {
            e[1] + e[2] >= 1 || !e[0].is_multiple_of(s)
        } else {
            e[0] + e[1] >= 1 || !e[2].is_multiple_of(s)
        }
    };
    run.check(span("image-span", &mut oracle, d, pred));
    let rd = d.min(4);
    let scan = radical_scan(&map, rd, m, &[], ScanOptions::default())?;
    let excluded_ok = scan.candidates.iter().all(|c| match c.verdict {
        RadicalVerdict::Excluded { m } => {
            oracle_member_status(&map, &c.candidate.pow(m)) == MembershipStatus::NotInCertified
        }
        _ => true,
    });
    let gens: &[usize] = if root_first { &[1, 2] } else { &[0, 1] };
    let evidence = scan.evidence_monomials();
    let expected: std::collections::BTreeSet<Monomial> = (1..=rd)
        .flat_map(|e| monomials_of_degree(3, e))
        .filter(|mono| gens.iter().any(|&i| mono.exps()[i] > 0))
        .collect();
    let diff = evidence.symmetric_difference(&expected).next().cloned();
    let ideal = if root_first { "(x2, x3)" } else { "(x1, x2)" };
    run.check(
        Check::new(
            "radical-evidence-is-ideal",
            diff.is_none() && excluded_ok,
            format!("evidence equals the {ideal} slice, d = {rd}, M = {m}"),
        )
        .with_counterexample(diff.map(|m| m.to_string())),
    );
    let gen_polys: Vec<Polynomial> = gens.iter().map(|&i| var(&field, 3, i)).collect();
    let r = check_prop27(&map, Some(&gen_polys), rd, m)?;
    run.check(
        Check::new(
            "sufficient-condition",
            r.status == Prop27Status::SatisfiedAtBound,
            format!("radical {ideal} inside the image and an ideal"),
        )
        .with_counterexample(r.witness),
    );
    Ok(())
}

fn oracle_member_status(map: &Map, q: &Polynomial) -> MembershipStatus {
    crate::image::member(map, q, q.degree().unwrap_or(0), None)
        .map(|v| v.status)
        .unwrap_or(MembershipStatus::NotFoundWithinSlack)
}

fn prop431(run: &mut Run) -> Result<()> {
    prop43(run, true)
}

fn prop432(run: &mut Run) -> Result<()> {
    prop43(run, false)
}

/// `V`-containment of the radical evidence for the triple Jordan block.
fn v_containment(run: &mut Run, lambda: &Scalar, d: u32, m: u32) -> Result<()> {
    let r = conjecture45_explore(lambda, d, m)?;
    run.check(
        Check::new(
            "v-in-radical-evidence",
            r.v_minus_evidence.is_empty(),
            format!("monomials with i3 ≥ i1 + 1 up to degree {d}, powers ≤ {m}"),
        )
        .with_counterexample(r.v_minus_evidence.first().map(ToString::to_string)),
    );
    Ok(())
}

fn prop441(run: &mut Run) -> Result<()> {
    let field = run.field(1)?;
    let d = run.degree(6);
    let m = run.power(6);
    let lambda = run.lambdas(&field, &["1"])?[0].clone();
    run.require(lambda.is_one(), || format!("prop4.4.1 needs λ = 1, got {lambda}"))?;
    let map = triple_jordan(&lambda)?;
    let oracle = graded(&map, d);
    run.check(table("parity-rule", &oracle, 0, d, |mono| {
        let e = mono.exps();
        if e[1] % 2 == 1 {
            e[2] >= e[0]
        } else {
            e[2] > e[0]
        }
    }));
    v_containment(run, &lambda, d.min(4), m)
}

fn prop442(run: &mut Run) -> Result<()> {
    let field = run.field(2)?;
    let d = run.degree(6);
    let m = run.power(6);
    let lambda = run.lambdas(&field, &["-1"])?[0].clone();
    let s = unity_order(&lambda);
    run.require(s.is_some_and(|s| s > 1), || {
        format!("prop4.4.2 needs λ a root of unity other than 1, got {lambda}")
    })?;
    let s = s.unwrap_or(2);
    run.set("s", s);
    let map = triple_jordan(&lambda)?;
    let oracle = graded(&map, d);
    let rule = |mono: &Monomial| {
        let e = mono.exps();
        !mono.degree().is_multiple_of(s) || e[2] > e[0]
    };
    run.check(table("resonance-rule", &oracle, 1, d, rule));
    // the two stated clauses on resonant degrees cover every monomial
    let uncovered = (1..=d)
        .flat_map(|e| monomials_of_degree(3, e))
        .filter(|mono| mono.degree() % s == 0)
        .find(|mono| {
            let e = mono.exps();
            let a = e[2] > e[0];
            let b = e[2] <= e[0];
            a == b
        });
    run.check(
        Check::new(
            "clauses-exhaustive",
            uncovered.is_none(),
            "i3 ≥ i1 + 1 or i3 ≤ i1 on resonant degrees",
        )
        .with_counterexample(uncovered.map(|m| m.to_string())),
    );
    v_containment(run, &lambda, d.min(4), m)
}

fn remark46(run: &mut Run) -> Result<()> {
    let field = run.field(1)?;
    let d = run.degree(5);
    let m = run.power(6);
    let b = run.multiplier(2);
    let delta = triple_jordan(&Scalar::one(&field))?;
    let derivation = Map::parse(MapKind::Derivation, &["x2 - 1/2*x3", "x3", "0"], &field)?;
    run.set("map", &delta);
    run.set("other_map", &derivation);
    let cmp = compare_images(&delta, &derivation, d, None)?;
    run.check(
        Check::new("images-agree", cmp.equal, format!("slices of degree ≤ {d}"))
            .with_counterexample(cmp.first_discrepancy.map(|e| format!("degree {e}"))),
    );
    run.check(mz_check("tail-window", &delta, 2.min(d), m, b, None)?);
    Ok(())
}

fn conj45(run: &mut Run) -> Result<()> {
    let field = run.field(1)?;
    let d = run.degree(5);
    let m = run.power(6);
    let lambda = run.lambdas(&field, &["1"])?[0].clone();
    let r = conjecture45_explore(&lambda, d, m)?;
    run.notes.push(format!(
        "{} evidence monomials outside V (open direction){}",
        r.evidence_minus_v.len(),
        r.evidence_minus_v
            .first()
            .map(|x| format!(", first {x}"))
            .unwrap_or_default()
    ));
    run.notes.extend(r.notes.iter().cloned());
    run.check(
        Check::new(
            "v-in-radical-evidence",
            r.v_minus_evidence.is_empty(),
            format!("{} candidates up to degree {d}, powers ≤ {m}", r.candidates),
        )
        .with_counterexample(r.v_minus_evidence.first().map(ToString::to_string)),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_every_claim() {
        assert_eq!(claim_ids().count(), 20);
        assert!(matches!(
            verify_claim("thm9.9", &ClaimParams::default()),
            Err(Error::UnknownClaim(_))
        ));
    }

    #[test]
    fn resonant_lambda_is_rejected() {
        let p = ClaimParams {
            conductor: Some(3),
            lambdas: vec!["z".into()],
            ..ClaimParams::default()
        };
        let err = verify_claim("thm2.1", &p).unwrap_err();
        assert!(err.to_string().contains("root of unity"), "{err}");
        let p = ClaimParams {
            allow_out_of_hypothesis: true,
            ..p
        };
        let r = verify_claim("thm2.1", &p).unwrap();
        assert!(r.exploratory && !r.passed);
    }
}
