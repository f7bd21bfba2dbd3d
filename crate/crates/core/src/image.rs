//! Degree-truncated slices of `Im δ` and `Im D`.
//!
//! Degree-preserving maps (linear `φ`, or `D` with linear coefficients) split
//! into homogeneous pieces, so `Im δ ∩ V_e = δ(V_e)` and every verdict is
//! exact. Other maps are handled through the filtration: the slice
//! `δ(V_{≤d+slack}) ∩ V_{≤d}` is contained in `Im δ ∩ V_{≤d}`, possibly
//! strictly, and non-membership is never certified.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::echelon::Echelon;
use crate::error::{Error, Result};
use crate::maps::{Map, MapKind};
use crate::normalize::triangularize_linear_part;
use crate::polyring::{monomials_of_degree, Monomial, Polynomial};
use crate::scalar::{Conductor, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SliceMode {
    /// One slice per homogeneous degree; exact.
    Graded,
    /// Cumulative slices of `V_{≤e}` from preimages of degree `≤ d + slack`.
    Filtered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageOptions {
    /// Extra preimage degree for filtered maps; `None` picks [`default_slack`].
    pub slack: Option<u32>,
    /// Record preimages of basis vectors (needed for `in` witnesses).
    pub witnesses: bool,
}

impl Default for ImageOptions {
    fn default() -> ImageOptions {
        ImageOptions {
            slack: None,
            witnesses: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisVector {
    pub pivot: Monomial,
    pub vector: Polynomial,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Polynomial>,
}

/// Graded: a basis of `δ(V_e)`. Filtered: the basis vectors whose pivot has
/// degree exactly `e`; slices `0..=e` together span the `≤ e` slice.
#[derive(Debug, Clone, Serialize)]
pub struct ImageSlice {
    pub degree: u32,
    /// `dim V_e` (graded) or `dim V_{≤e}` (filtered).
    pub domain_dim: usize,
    /// `dim δ(V_e)` (graded) or the dimension of the `≤ e` slice (filtered).
    pub dimension: usize,
    /// `dim ker(δ|V_e)`, graded mode only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_dim: Option<usize>,
    pub basis: Vec<BasisVector>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ImageBasis {
    pub map_kind: MapKind,
    pub mode: SliceMode,
    pub degree_bound: u32,
    pub slack: u32,
    /// Whether each slice equals `Im δ` intersected with its degree range.
    pub exact: bool,
    pub slices: Vec<ImageSlice>,
}

impl ImageBasis {
    /// All basis vectors, pivots descending.
    pub fn vectors(&self) -> impl Iterator<Item = &BasisVector> + '_ {
        self.slices.iter().rev().flat_map(|s| s.basis.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MembershipStatus {
    In,
    NotInCertified,
    NotFoundWithinSlack,
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipVerdict {
    pub status: MembershipStatus,
    pub residue: Polynomial,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Polynomial>,
}

/// Per-degree outcome of comparing two subspaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub degree: u32,
    pub left_dim: usize,
    pub right_dim: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SliceComparison {
    pub mode: SliceMode,
    pub degree_bound: u32,
    pub equal: bool,
    pub first_discrepancy: Option<u32>,
    pub degrees: Vec<DegreeComparison>,
}

/// `2·s·n` for the largest finite root-of-unity order `s` among the
/// eigenvalues of the linear part of `φ`, otherwise `2n`; derivations get `2n`.
pub fn default_slack(map: &Map) -> u32 {
    let n = map.nvars() as u32;
    let Map::E(d) = map else { return 2 * n };
    let a = d.phi().linear_part();
    let eigenvalues = if a.is_upper_triangular() {
        a.diagonal()
    } else {
        triangularize_linear_part(&a).map(|t| t.eigenvalues).unwrap_or_default()
    };
    let s = eigenvalues
        .iter()
        .filter_map(Scalar::root_of_unity_order)
        .max()
        .unwrap_or(1);
    2 * s * n
}

/// Lazily extended image slices of one map.
pub struct ImageOracle {
    map: Map,
    mode: SliceMode,
    slack: u32,
    track: bool,
    graded: Vec<Echelon>,
    filtered: Echelon,
    /// Highest preimage degree inserted into `filtered`.
    filtered_top: Option<u32>,
    /// `φ(m)` for every monomial of degree `layer_degree`.
    layer: HashMap<Monomial, Polynomial>,
    layer_degree: u32,
}

impl ImageOracle {
    pub fn new(map: &Map, options: ImageOptions) -> ImageOracle {
        let field = map.field();
        let n = map.nvars();
        let mode = if map.is_degree_preserving() {
            SliceMode::Graded
        } else {
            SliceMode::Filtered
        };
        let slack = match mode {
            SliceMode::Graded => 0,
            SliceMode::Filtered => options.slack.unwrap_or_else(|| default_slack(map)),
        };
        let one = Monomial::one(n);
        ImageOracle {
            map: map.clone(),
            mode,
            slack,
            track: options.witnesses,
            graded: Vec::new(),
            filtered: Echelon::new(field, n, options.witnesses),
            filtered_top: None,
            layer: HashMap::from([(one, Polynomial::one(field, n))]),
            layer_degree: 0,
        }
    }

    pub fn map(&self) -> &Map {
        &self.map
    }

    pub fn mode(&self) -> SliceMode {
        self.mode
    }

    pub fn slack(&self) -> u32 {
        self.slack
    }

    pub fn is_exact(&self) -> bool {
        self.mode == SliceMode::Graded
    }

    fn field(&self) -> &Arc<Conductor> {
        self.map.field()
    }

    /// `(m, map(m))` for every monomial `m` of degree `e`, ascending.
    fn images_of_degree(&mut self, e: u32) -> Vec<(Monomial, Polynomial)> {
        let n = self.map.nvars();
        let mut monos = monomials_of_degree(n, e);
        monos.reverse();
        match &self.map {
            Map::D(d) => {
                let coeffs = d.coeffs().to_vec();
                monos
                    .into_par_iter()
                    .map(|m| {
                        let mut out = Polynomial::zero(coeffs[0].field(), n);
                        for (i, c) in coeffs.iter().enumerate() {
                            if let Some(low) = m.lower(i) {
                                let k = Scalar::from_integer(c.field(), i64::from(m.exps()[i]));
                                out.add_scaled(&k, &c.mul_monomial(&low));
                            }
                        }
                        (m, out)
                    })
                    .collect()
            }
            Map::E(d) => {
                let phi_vars = d.phi().images().to_vec();
                assert!(e <= self.layer_degree + 1, "layers are built in order");
                if e == self.layer_degree + 1 {
                    let prev = &self.layer;
                    let next: HashMap<Monomial, Polynomial> = monos
                        .par_iter()
                        .map(|m| {
                            let k = m.exps().iter().position(|&x| x > 0).expect("positive degree");
                            let low = m.lower(k).expect("positive exponent");
                            (m.clone(), &prev[&low] * &phi_vars[k])
                        })
                        .collect();
                    self.layer = next;
                    self.layer_degree = e;
                }
                assert_eq!(e, self.layer_degree, "layer cache out of step");
                let layer = &self.layer;
                let field = Arc::clone(self.map.field());
                monos
                    .into_par_iter()
                    .map(|m| {
                        let mut v = -&layer[&m];
                        v.add_term(m.clone(), &Scalar::one(&field));
                        (m, v)
                    })
                    .collect()
            }
        }
    }

    /// Makes slices up to degree `d` available.
    pub fn ensure(&mut self, d: u32) {
        match self.mode {
            SliceMode::Graded => {
                let start = self.graded.len() as u32;
                if start > d {
                    return;
                }
                let batches: Vec<Vec<(Monomial, Polynomial)>> = (start..=d).map(|e| self.images_of_degree(e)).collect();
                let field = Arc::clone(self.field());
                let n = self.map.nvars();
                let track = self.track;
                let built: Vec<Echelon> = batches
                    .into_par_iter()
                    .map(|batch| {
                        let mut ech = Echelon::new(&field, n, track);
                        for (m, v) in batch {
                            let pre = track.then(|| Polynomial::monomial(&field, m));
                            ech.insert(&v, pre.as_ref());
                        }
                        ech.finalize();
                        ech
                    })
                    .collect();
                self.graded.extend(built);
            }
            SliceMode::Filtered => {
                let top = d.saturating_add(self.slack);
                let start = self.filtered_top.map_or(0, |t| t + 1);
                if start > top {
                    return;
                }
                for e in start..=top {
                    let batch = self.images_of_degree(e);
                    for (m, v) in batch {
                        let pre = self.track.then(|| Polynomial::monomial(self.map.field(), m));
                        self.filtered.insert(&v, pre.as_ref());
                    }
                }
                self.filtered.finalize();
                self.filtered_top = Some(top);
            }
        }
    }

    /// Degree-`e` slice; graded mode only.
    pub fn graded_slice(&mut self, e: u32) -> &Echelon {
        assert_eq!(
            self.mode,
            SliceMode::Graded,
            "graded slices need a degree-preserving map"
        );
        self.ensure(e);
        &self.graded[e as usize]
    }

    /// Reduced echelon basis of the `≤ e` slice, pivots descending.
    pub fn basis_up_to(&mut self, e: u32) -> Vec<Polynomial> {
        self.ensure(e);
        match self.mode {
            SliceMode::Graded => (0..=e)
                .rev()
                .flat_map(|k| self.graded[k as usize].basis().map(|(_, v)| v.clone()))
                .collect(),
            SliceMode::Filtered => self.filtered.vectors_up_to(e),
        }
    }

    /// Reduced echelon basis of the degree-`e` slice (graded) or of the
    /// `≤ e` slice (filtered).
    pub fn basis_at(&mut self, e: u32) -> Vec<Polynomial> {
        match self.mode {
            SliceMode::Graded => self.graded_slice(e).basis().map(|(_, v)| v.clone()).collect(),
            SliceMode::Filtered => self.basis_up_to(e),
        }
    }

    pub fn member(&mut self, q: &Polynomial) -> MembershipVerdict {
        self.ensure(q.degree().unwrap_or(0));
        self.member_within(q)
    }

    /// Highest degree for which slices are available.
    pub fn ready_degree(&self) -> Option<u32> {
        match self.mode {
            SliceMode::Graded => (self.graded.len() as u32).checked_sub(1),
            SliceMode::Filtered => self.filtered_top.map(|t| t.saturating_sub(self.slack)),
        }
    }

    /// Like [`ImageOracle::member`] without extending; panics unless
    /// `ensure(deg q)` has run. Usable from parallel readers.
    pub fn member_within(&self, q: &Polynomial) -> MembershipVerdict {
        let field = Arc::clone(self.field());
        let n = self.map.nvars();
        let Some(deg) = q.degree() else {
            return MembershipVerdict {
                status: MembershipStatus::In,
                residue: q.clone(),
                witness: self.track.then(|| Polynomial::zero(&field, n)),
            };
        };
        assert!(
            self.ready_degree().is_some_and(|r| r >= deg),
            "slices up to degree {deg} are not built"
        );
        let (residue, witness) = match self.mode {
            SliceMode::Graded => {
                let mut residue = Polynomial::zero(&field, n);
                let mut witness = self.track.then(|| Polynomial::zero(&field, n));
                for e in q.min_degree().unwrap_or(0)..=deg {
                    let part = q.homogeneous_component(e);
                    if part.is_zero() {
                        continue;
                    }
                    let r = self.graded[e as usize].reduce(&part);
                    residue = &residue + &r.residue;
                    if let (Some(w), Some(rw)) = (witness.as_mut(), r.witness) {
                        *w = &*w + &rw;
                    }
                }
                (residue, witness)
            }
            SliceMode::Filtered => {
                let r = self.filtered.reduce(q);
                (r.residue, r.witness)
            }
        };
        let status = if residue.is_zero() {
            MembershipStatus::In
        } else if self.mode == SliceMode::Graded {
            MembershipStatus::NotInCertified
        } else {
            MembershipStatus::NotFoundWithinSlack
        };
        let witness = witness.filter(|_| status == MembershipStatus::In);
        if let Some(w) = &witness {
            debug_assert_eq!(&self.map.apply(w), q);
        }
        MembershipVerdict {
            status,
            residue,
            witness,
        }
    }

    /// Snapshot of all slices up to `d`.
    pub fn basis(&mut self, d: u32) -> ImageBasis {
        self.ensure(d);
        let n = self.map.nvars();
        let to_vec = |ech: &Echelon| -> Vec<BasisVector> {
            ech.basis_with_preimages(|m| m.degree() <= d)
                .into_iter()
                .map(|(m, v, w)| BasisVector {
                    pivot: m.clone(),
                    vector: v.clone(),
                    witness: w,
                })
                .collect()
        };
        let slices = match self.mode {
            SliceMode::Graded => (0..=d)
                .map(|e| {
                    let ech = &self.graded[e as usize];
                    ImageSlice {
                        degree: e,
                        domain_dim: ech.inserted(),
                        dimension: ech.rank(),
                        kernel_dim: Some(ech.kernel_dim()),
                        basis: to_vec(ech),
                    }
                })
                .collect(),
            SliceMode::Filtered => {
                let mut cumulative = 0;
                let mut domain = 0;
                let all = to_vec(&self.filtered);
                (0..=d)
                    .map(|e| {
                        let basis: Vec<BasisVector> = all.iter().filter(|b| b.pivot.degree() == e).cloned().collect();
                        cumulative += basis.len();
                        domain += monomials_of_degree(n, e).len();
                        ImageSlice {
                            degree: e,
                            domain_dim: domain,
                            dimension: cumulative,
                            kernel_dim: None,
                            basis,
                        }
                    })
                    .collect()
            }
        };
        ImageBasis {
            map_kind: self.map.kind(),
            mode: self.mode,
            degree_bound: d,
            slack: self.slack,
            exact: self.is_exact(),
            slices,
        }
    }
}

/// Reduced echelon bases of `Im δ` (or `Im D`) up to degree `d`.
pub fn image_basis(map: &Map, d: u32, slack: Option<u32>) -> ImageBasis {
    let mut oracle = ImageOracle::new(map, ImageOptions { slack, witnesses: true });
    oracle.basis(d)
}

/// Decides `q ∈ Im δ` from slices up to degree `d ≥ deg q`.
pub fn member(map: &Map, q: &Polynomial, d: u32, slack: Option<u32>) -> Result<MembershipVerdict> {
    if q.degree().is_some_and(|e| e > d) {
        return Err(Error::DegreeBound(format!(
            "query has degree {} above the bound {d}",
            q.degree().unwrap_or(0)
        )));
    }
    let mut oracle = ImageOracle::new(map, ImageOptions { slack, witnesses: true });
    // filtered preimages of degree up to d + slack, even when deg q < d
    oracle.ensure(d);
    Ok(oracle.member(q))
}

fn echelon_of(field: &Arc<Conductor>, n: usize, vectors: impl IntoIterator<Item = Polynomial>) -> Vec<Polynomial> {
    let mut ech = Echelon::new(field, n, false);
    for v in vectors {
        ech.insert(&v, None);
    }
    ech.finalize();
    ech.basis().map(|(_, v)| v.clone()).collect()
}

/// Reduced basis of `span{g·m}` over generators `g` and monomials `m` with
/// `deg(g·m) = e` (graded) or `≤ e` (filtered).
///
/// For the filtered slice this is the degree-`≤ e` part of the ideal exactly
/// when the generators' leading forms generate the ideal of leading forms,
/// which holds for a single generator or for monomials.
fn ideal_slice(field: &Arc<Conductor>, n: usize, generators: &[Polynomial], e: u32, graded: bool) -> Vec<Polynomial> {
    let mut products = Vec::new();
    for g in generators {
        let Some(dg) = g.degree() else { continue };
        if dg > e {
            continue;
        }
        let degrees: Vec<u32> = if graded { vec![e - dg] } else { (0..=e - dg).collect() };
        for k in degrees {
            for m in monomials_of_degree(n, k) {
                products.push(g.mul_monomial(&m));
            }
        }
    }
    echelon_of(field, n, products)
}

fn compare_slices(
    mode: SliceMode,
    d: u32,
    mut left: impl FnMut(u32) -> Vec<Polynomial>,
    mut right: impl FnMut(u32) -> Vec<Polynomial>,
) -> SliceComparison {
    let mut degrees = Vec::new();
    for e in 0..=d {
        let (a, b) = (left(e), right(e));
        degrees.push(DegreeComparison {
            degree: e,
            left_dim: a.len(),
            right_dim: b.len(),
            equal: a == b,
        });
    }
    let first_discrepancy = degrees.iter().find(|c| !c.equal).map(|c| c.degree);
    SliceComparison {
        mode,
        degree_bound: d,
        equal: first_discrepancy.is_none(),
        first_discrepancy,
        degrees,
    }
}

/// Compares the image slices with the slices of the ideal generated by
/// `generators`, degree by degree up to `d`. Left is the image, right the
/// ideal.
pub fn ideal_slice_test(map: &Map, generators: &[Polynomial], d: u32, slack: Option<u32>) -> Result<SliceComparison> {
    if let Some(g) = generators.iter().find(|g| g.nvars() != map.nvars()) {
        return Err(Error::ShapeMismatch(format!("generator {g} lives in a different ring")));
    }
    let field = Arc::clone(map.field());
    let n = map.nvars();
    let mut oracle = ImageOracle::new(
        map,
        ImageOptions {
            slack,
            witnesses: false,
        },
    );
    let graded = oracle.mode() == SliceMode::Graded && generators.iter().all(Polynomial::is_homogeneous);
    let mode = if graded { SliceMode::Graded } else { SliceMode::Filtered };
    Ok(compare_slices(
        mode,
        d,
        |e| {
            if graded {
                oracle.basis_at(e)
            } else {
                oracle.basis_up_to(e)
            }
        },
        |e| ideal_slice(&field, n, generators, e, graded),
    ))
}

/// Per-degree equality of two image slices up to degree `d`.
///
/// Two degree-preserving maps are compared on homogeneous slices; anything
/// else on filtered `≤ e` slices with the same slack.
pub fn compare_images(a: &Map, b: &Map, d: u32, slack: Option<u32>) -> Result<SliceComparison> {
    if a.nvars() != b.nvars() || a.field() != b.field() {
        return Err(Error::ShapeMismatch("maps live in different rings".into()));
    }
    let graded = a.is_degree_preserving() && b.is_degree_preserving();
    let slack = match slack {
        Some(s) => Some(s),
        None if graded => None,
        None => Some(default_slack(a).max(default_slack(b))),
    };
    let opts = ImageOptions {
        slack,
        witnesses: false,
    };
    let mut left = ImageOracle::new(a, opts);
    let mut right = ImageOracle::new(b, opts);
    let mode = if graded { SliceMode::Graded } else { SliceMode::Filtered };
    Ok(compare_slices(
        mode,
        d,
        |e| if graded { left.basis_at(e) } else { left.basis_up_to(e) },
        |e| {
            if graded {
                right.basis_at(e)
            } else {
                right.basis_up_to(e)
            }
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::MapKind;
    use crate::polyring::parse_polynomial;

    fn endo(src: &[&str], n: u32) -> Map {
        let k = Conductor::new(n).unwrap();
        Map::parse(MapKind::Endomorphism, src, &k).unwrap()
    }

    fn poly(m: &Map, s: &str) -> Polynomial {
        parse_polynomial(s, m.nvars(), m.field()).unwrap()
    }

    #[test]
    fn identity_has_empty_image() {
        let m = endo(&["x1", "x2"], 1);
        let b = image_basis(&m, 4, None);
        assert!(b.exact);
        assert!(b.slices.iter().all(|s| s.basis.is_empty()));
    }

    #[test]
    fn jordan_block_degree_one_is_full() {
        let m = endo(&["2*x1 + x2", "2*x2"], 1);
        let b = image_basis(&m, 1, None);
        let v: Vec<String> = b.slices[1].basis.iter().map(|v| v.vector.to_string()).collect();
        assert_eq!(v, ["x1", "x2"]);
    }

    #[test]
    fn cube_root_of_unity_jordan_pair() {
        let m = endo(&["z*x1 + x2", "z*x2"], 3);
        let b = image_basis(&m, 3, None);
        assert_eq!(b.slices[3].dimension, 3);
        assert!(b.slices[3].basis.iter().all(|v| v.pivot != Monomial::new(vec![3, 0])));
        let v = member(&m, &poly(&m, "x1^2*x2"), 3, None).unwrap();
        assert_eq!(v.status, MembershipStatus::In);
        assert_eq!(m.apply(v.witness.as_ref().unwrap()), poly(&m, "x1^2*x2"));
        let v = member(&m, &poly(&m, "x1^3"), 3, None).unwrap();
        assert_eq!(v.status, MembershipStatus::NotInCertified);
        let v = member(&m, &Polynomial::zero(m.field(), 2), 0, None).unwrap();
        assert_eq!(v.status, MembershipStatus::In);
        assert!(v.witness.unwrap().is_zero());
    }

    #[test]
    fn ideal_tests() {
        let m = endo(&["2*x1 + x2", "2*x2"], 1);
        let gens = [poly(&m, "x1"), poly(&m, "x2")];
        assert!(ideal_slice_test(&m, &gens, 6, None).unwrap().equal);

        let p = endo(&["x1 + x2 + 1", "x2"], 1);
        let r = ideal_slice_test(&p, &[poly(&p, "x2 + 1")], 5, None).unwrap();
        assert_eq!(r.mode, SliceMode::Filtered);
        assert!(r.equal, "{r:?}");

        let zero = endo(&["x1", "x2"], 1);
        let r = ideal_slice_test(&zero, &[poly(&zero, "x1")], 3, None).unwrap();
        assert_eq!(r.first_discrepancy, Some(1));
    }

    #[test]
    fn remark_pair_images_agree() {
        let k = Conductor::new(1).unwrap();
        let delta = Map::parse(MapKind::Endomorphism, &["x1 + x2", "x2 + x3", "x3"], &k).unwrap();
        let d = Map::parse(MapKind::Derivation, &["x2 - 1/2*x3", "x3", "0"], &k).unwrap();
        let r = compare_images(&delta, &d, 5, None).unwrap();
        assert!(r.equal, "{r:?}");
        let zero = Map::parse(MapKind::Endomorphism, &["x1", "x2", "x3"], &k).unwrap();
        let r = compare_images(&delta, &zero, 3, None).unwrap();
        assert_eq!(r.first_discrepancy, Some(1));
    }

    #[test]
    fn slack_defaults() {
        assert_eq!(default_slack(&endo(&["z*x1 + x2 + 1", "z*x2"], 3)), 12);
        assert_eq!(default_slack(&endo(&["2*x1 + 1", "3*x2"], 1)), 4);
        assert_eq!(default_slack(&endo(&["-x1 + 1", "x2"], 1)), 8);
    }
}
