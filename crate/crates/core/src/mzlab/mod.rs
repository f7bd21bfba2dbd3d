//! Bounded Mathieu-Zhao experiments: radical scans, the ideal-radical
//! sufficient condition, tail-window spot checks and claim batteries.
//!
//! "For all `m ≫ 0`" is read as the window `m ∈ [B+1, M]`, where `B` bounds
//! the multiplier degree; this is the explicit tail bound `N = deg h + 1`
//! available for the triple Jordan block.

mod claims;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::{ImageOptions, ImageOracle, MembershipStatus, SliceMode};
use crate::maps::{Endomorphism, Map};
use crate::polyring::{monomials_of_degree, Monomial, Polynomial};
use crate::scalar::Scalar;

pub use claims::{claim_ids, verify_claim, ClaimParams, ClaimReport};

/// Largest power degree tested unless configured otherwise.
pub const DEFAULT_POWER_CAP: u32 = 32;

/// One named check with its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
            counterexample: None,
        }
    }

    pub fn with_counterexample(mut self, c: Option<String>) -> Check {
        self.counterexample = c;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    pub power_cap: u32,
    pub slack: Option<u32>,
}

impl Default for ScanOptions {
    fn default() -> ScanOptions {
        ScanOptions {
            power_cap: DEFAULT_POWER_CAP,
            slack: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum RadicalVerdict {
    /// Every tested power lies in the image.
    InRadicalEvidence,
    /// `f^m` is certified outside the image.
    Excluded { m: u32 },
    /// `f^m` was not found within the slack; nothing is certified.
    Inconclusive { m: u32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateVerdict {
    pub candidate: Polynomial,
    #[serde(flatten)]
    pub verdict: RadicalVerdict,
    pub powers_tested: u32,
    pub truncated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadicalScan {
    pub degree_bound: u32,
    pub power_bound: u32,
    pub power_cap: u32,
    pub exact: bool,
    pub candidates: Vec<CandidateVerdict>,
    pub truncations: Vec<String>,
}

impl RadicalScan {
    pub fn evidence(&self) -> impl Iterator<Item = &Polynomial> + '_ {
        self.candidates
            .iter()
            .filter(|c| c.verdict == RadicalVerdict::InRadicalEvidence)
            .map(|c| &c.candidate)
    }

    /// Monomials among the evidence set.
    pub fn evidence_monomials(&self) -> BTreeSet<Monomial> {
        self.evidence()
            .filter(|p| p.len() == 1)
            .filter_map(|p| p.leading().map(|(m, _)| m.clone()))
            .collect()
    }
}

fn oracle_for(map: &Map, slack: Option<u32>) -> ImageOracle {
    ImageOracle::new(
        map,
        ImageOptions {
            slack,
            witnesses: false,
        },
    )
}

fn scan_candidate(oracle: &ImageOracle, f: &Polynomial, powers: u32, cap: u32) -> CandidateVerdict {
    let deg = f.degree().unwrap_or(0);
    let mut tested = 0;
    let mut truncated = false;
    let mut verdict = RadicalVerdict::InRadicalEvidence;
    let mut power = Polynomial::one(f.field(), f.nvars());
    for m in 1..=powers {
        if deg.saturating_mul(m) > cap {
            truncated = true;
            break;
        }
        power = &power * f;
        tested = m;
        match oracle.member_within(&power).status {
            MembershipStatus::In => {}
            MembershipStatus::NotInCertified => {
                verdict = RadicalVerdict::Excluded { m };
                break;
            }
            MembershipStatus::NotFoundWithinSlack => {
                verdict = RadicalVerdict::Inconclusive { m };
                break;
            }
        }
    }
    CandidateVerdict {
        candidate: f.clone(),
        verdict,
        powers_tested: tested,
        truncated,
    }
}

/// Tests `f^m ∈ Im δ` for `m = 1…M` on every nonconstant monomial `f` of
/// degree `≤ d` plus the `extra` candidates.
pub fn radical_scan(map: &Map, d: u32, powers: u32, extra: &[Polynomial], options: ScanOptions) -> Result<RadicalScan> {
    if d == 0 || powers == 0 {
        return Err(Error::RejectedInput("radical scan needs d ≥ 1 and M ≥ 1".into()));
    }
    let field = map.field();
    let n = map.nvars();
    let mut candidates: Vec<Polynomial> = (1..=d)
        .flat_map(|e| monomials_of_degree(n, e))
        .map(|m| Polynomial::monomial(field, m))
        .collect();
    candidates.extend(extra.iter().filter(|p| !p.is_zero()).cloned());
    let top = candidates
        .iter()
        .map(|f| f.degree().unwrap_or(0).saturating_mul(powers))
        .max()
        .unwrap_or(0)
        .min(options.power_cap);
    let mut oracle = oracle_for(map, options.slack);
    oracle.ensure(top);
    let verdicts: Vec<CandidateVerdict> = candidates
        .par_iter()
        .map(|f| scan_candidate(&oracle, f, powers, options.power_cap))
        .collect();
    let truncations = verdicts
        .iter()
        .filter(|v| v.truncated)
        .map(|v| {
            format!(
                "{}: powers above m = {} exceed the degree cap {}",
                v.candidate, v.powers_tested, options.power_cap
            )
        })
        .collect();
    Ok(RadicalScan {
        degree_bound: d,
        power_bound: powers,
        power_cap: options.power_cap,
        exact: oracle.is_exact(),
        candidates: verdicts,
        truncations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prop27Status {
    SatisfiedAtBound,
    Violated,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop27Report {
    pub status: Prop27Status,
    /// `supplied` or `scan`.
    pub source: String,
    pub generators: Vec<Polynomial>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Checks at degree `≤ d` that a candidate radical `R` lies in the image
/// and is closed under multiplication by the variables.
///
/// `R` is the ideal generated by `generators` when supplied, otherwise the
/// evidence set of `radical_scan(map, d, M)`.
pub fn check_prop27(map: &Map, generators: Option<&[Polynomial]>, d: u32, powers: u32) -> Result<Prop27Report> {
    let field = map.field();
    let n = map.nvars();
    let mut oracle = oracle_for(map, None);
    oracle.ensure(d);
    let mut checks = Vec::new();
    let mut witness = None;
    let note = |w: &mut Option<String>, s: String| {
        if w.is_none() {
            *w = Some(s);
        }
    };
    let (source, gens) = match generators {
        Some(g) => {
            let scan = radical_scan(
                map,
                1.max(g.iter().filter_map(Polynomial::degree).max().unwrap_or(1)),
                powers,
                g,
                ScanOptions::default(),
            )?;
            // only the supplied generators matter here
            let bad: Vec<String> = scan
                .candidates
                .iter()
                .filter(|c| g.contains(&c.candidate))
                .filter(|c| c.verdict != RadicalVerdict::InRadicalEvidence)
                .map(|c| c.candidate.to_string())
                .collect();
            let first = bad.first().cloned();
            if let Some(b) = &first {
                note(&mut witness, format!("{b} has a power outside the image"));
            }
            checks.push(
                Check::new(
                    "generators-in-radical",
                    bad.is_empty(),
                    format!("g^m ∈ Im for m ≤ {powers}, {} generators", g.len()),
                )
                .with_counterexample(first),
            );
            ("supplied".to_string(), g.to_vec())
        }
        None => {
            let scan = radical_scan(map, d, powers, &[], ScanOptions::default())?;
            ("scan".to_string(), scan.evidence().cloned().collect())
        }
    };

    // R_{≤d}: ideal slice when supplied, the evidence span otherwise
    let r_basis: Vec<Polynomial> = if generators.is_some() {
        let mut out = Vec::new();
        for g in &gens {
            let Some(dg) = g.degree() else { continue };
            for e in 0..=d.saturating_sub(dg) {
                for m in monomials_of_degree(n, e) {
                    out.push(g.mul_monomial(&m));
                }
            }
        }
        out
    } else {
        gens.clone()
    };
    let missing = r_basis
        .iter()
        .filter(|p| p.degree().is_some_and(|e| e <= d))
        .find(|p| oracle.member_within(p).status != MembershipStatus::In);
    if let Some(p) = missing {
        note(&mut witness, format!("{p} is not in the image"));
    }
    checks.push(
        Check::new(
            "radical-in-image",
            missing.is_none(),
            format!("{} elements of degree ≤ {d}", r_basis.len()),
        )
        .with_counterexample(missing.map(ToString::to_string)),
    );

    // closure: x_i·f stays in R for deg f < d
    let closure_failure = if generators.is_some() {
        None
    } else {
        let lead = |f: &Polynomial| f.leading().map(|(m, _)| m.clone());
        let set: BTreeSet<Monomial> = gens.iter().filter(|f| f.len() == 1).filter_map(lead).collect();
        set.iter()
            .filter(|m| m.degree() < d)
            .flat_map(|m| (0..n).map(move |i| m.mul(&Monomial::var(n, i))))
            .find(|m| !set.contains(m))
            .map(|m| Polynomial::monomial(field, m))
    };
    if let Some(p) = &closure_failure {
        note(&mut witness, format!("{p} leaves the candidate radical"));
    }
    checks.push(
        Check::new(
            "radical-is-ideal",
            closure_failure.is_none(),
            if generators.is_some() {
                "generated ideal, closed by construction".to_string()
            } else {
                format!("x_i·f for evidence monomials f of degree < {d}")
            },
        )
        .with_counterexample(closure_failure.map(|p| p.to_string())),
    );
    let status = if checks.iter().all(|c| c.passed) {
        Prop27Status::SatisfiedAtBound
    } else {
        Prop27Status::Violated
    };
    Ok(Prop27Report {
        status,
        source,
        generators: gens,
        checks,
        witness,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MzViolation {
    pub a: Polynomial,
    pub b: Polynomial,
    pub m: u32,
    pub certified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MzReport {
    pub degree_bound: u32,
    pub power_bound: u32,
    pub multiplier_bound: u32,
    /// `[B+1, M]`.
    pub window: (u32, u32),
    pub exact: bool,
    pub premise: Vec<Polynomial>,
    pub pairs_checked: usize,
    pub violations: Vec<MzViolation>,
    pub notes: Vec<String>,
    pub passed: bool,
}

/// For monomials `a` (degree `≤ d`) with `a^m ∈ Im δ` for all `m ≤ M` and
/// monomials `b` (degree `≤ B`), checks `b·a^m ∈ Im δ` for `m ∈ [B+1, M]`.
pub fn mz_spot_check(map: &Map, d: u32, powers: u32, multiplier: u32, options: ScanOptions) -> Result<MzReport> {
    let field = map.field();
    let n = map.nvars();
    let mut notes = Vec::new();
    let lo = multiplier + 1;
    if lo > powers {
        notes.push(format!("empty window: B + 1 = {lo} exceeds M = {powers}"));
    }
    let top = (d.saturating_mul(powers) + multiplier).min(options.power_cap);
    if d.saturating_mul(powers) + multiplier > options.power_cap {
        notes.push(format!("degrees above the cap {} were skipped", options.power_cap));
    }
    let mut oracle = oracle_for(map, options.slack);
    oracle.ensure(top);

    let scan = radical_scan(map, d.max(1), powers, &[], options)?;
    let premise: Vec<Polynomial> = scan
        .candidates
        .iter()
        .filter(|c| c.candidate.degree().is_some_and(|e| e <= d))
        .filter(|c| c.verdict == RadicalVerdict::InRadicalEvidence && !c.truncated)
        .map(|c| c.candidate.clone())
        .collect();
    if premise.is_empty() {
        notes.push("no monomial satisfies the premise; nothing to check".into());
    }
    let multipliers: Vec<Polynomial> = (0..=multiplier)
        .flat_map(|e| monomials_of_degree(n, e))
        .map(|m| Polynomial::monomial(field, m))
        .collect();
    let tasks: Vec<(usize, usize)> = (0..premise.len())
        .flat_map(|i| (0..multipliers.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<(usize, Vec<MzViolation>)> = tasks
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&premise[i], &multipliers[j]);
            let mut count = 0;
            let mut bad = Vec::new();
            for m in lo..=powers {
                let p = b * &a.pow(m);
                if p.degree().unwrap_or(0) > top {
                    break;
                }
                count += 1;
                match oracle.member_within(&p).status {
                    MembershipStatus::In => {}
                    s => bad.push(MzViolation {
                        a: a.clone(),
                        b: b.clone(),
                        m,
                        certified: s == MembershipStatus::NotInCertified,
                    }),
                }
            }
            (usize::from(count > 0), bad)
        })
        .collect();
    let pairs_checked = results.iter().map(|r| r.0).sum();
    let violations: Vec<MzViolation> = results.into_iter().flat_map(|r| r.1).collect();
    Ok(MzReport {
        degree_bound: d,
        power_bound: powers,
        multiplier_bound: multiplier,
        window: (lo, powers),
        exact: oracle.is_exact(),
        passed: violations.is_empty(),
        premise,
        pairs_checked,
        violations,
        notes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Conj45Report {
    pub lambda: Scalar,
    pub degree_bound: u32,
    pub power_bound: u32,
    pub candidates: usize,
    /// Evidence monomials outside `V`: the open direction.
    pub evidence_minus_v: Vec<Monomial>,
    /// `V`-monomials without radical evidence; must be empty.
    pub v_minus_evidence: Vec<Monomial>,
    pub passed: bool,
    pub notes: Vec<String>,
}

/// `φ = (λx_1 + x_2, λx_2 + x_3, λx_3)`.
pub fn triple_jordan(lambda: &Scalar) -> Result<Map> {
    let field = lambda.field();
    let x = |i| Polynomial::var(field, 3, i);
    let images = vec![
        &x(0).scale(lambda) + &x(1),
        &x(1).scale(lambda) + &x(2),
        x(2).scale(lambda),
    ];
    Ok(Map::ederivation(Endomorphism::new(images)?))
}

/// `i_3 ≥ i_1 + 1`.
pub fn in_conjectured_space(m: &Monomial) -> bool {
    m.exps()[2] > m.exps()[0]
}

/// Compares the bounded radical evidence of the triple Jordan block with the
/// span `V` of monomials `x_1^{i_1}x_2^{i_2}x_3^{i_3}` with `i_3 ≥ i_1 + 1`.
pub fn conjecture45_explore(lambda: &Scalar, d: u32, powers: u32) -> Result<Conj45Report> {
    let map = triple_jordan(lambda)?;
    let mut notes = Vec::new();
    if d == 0 {
        notes.push("degree bound 0: no nonconstant candidates, vacuous".into());
        return Ok(Conj45Report {
            lambda: lambda.clone(),
            degree_bound: 0,
            power_bound: powers,
            candidates: 0,
            evidence_minus_v: Vec::new(),
            v_minus_evidence: Vec::new(),
            passed: true,
            notes,
        });
    }
    let scan = radical_scan(&map, d, powers.max(1), &[], ScanOptions::default())?;
    notes.extend(scan.truncations.iter().cloned());
    let evidence = scan.evidence_monomials();
    let all: Vec<Monomial> = (1..=d).flat_map(|e| monomials_of_degree(3, e)).collect();
    let evidence_minus_v: Vec<Monomial> = all
        .iter()
        .filter(|m| evidence.contains(m) && !in_conjectured_space(m))
        .cloned()
        .collect();
    let v_minus_evidence: Vec<Monomial> = all
        .iter()
        .filter(|m| in_conjectured_space(m) && !evidence.contains(m))
        .cloned()
        .collect();
    Ok(Conj45Report {
        lambda: lambda.clone(),
        degree_bound: d,
        power_bound: powers,
        candidates: all.len(),
        passed: v_minus_evidence.is_empty(),
        evidence_minus_v,
        v_minus_evidence,
        notes,
    })
}

/// Unused by slices but handy for reports: graded or filtered.
pub fn slice_mode(map: &Map) -> SliceMode {
    if map.is_degree_preserving() {
        SliceMode::Graded
    } else {
        SliceMode::Filtered
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::MapKind;
    use crate::scalar::Conductor;

    fn endo(src: &[&str], n: u32) -> Map {
        let k = Conductor::new(n).unwrap();
        Map::parse(MapKind::Endomorphism, src, &k).unwrap()
    }

    fn poly(m: &Map, s: &str) -> Polynomial {
        crate::parse_polynomial(s, m.nvars(), m.field()).unwrap()
    }

    #[test]
    fn cube_root_jordan_scan() {
        let m = endo(&["z*x1 + x2", "z*x2"], 3);
        let scan = radical_scan(&m, 1, 6, &[], ScanOptions::default()).unwrap();
        let x1 = scan.candidates.iter().find(|c| c.candidate == poly(&m, "x1")).unwrap();
        assert_eq!(x1.verdict, RadicalVerdict::Excluded { m: 3 });
        let x2 = scan.candidates.iter().find(|c| c.candidate == poly(&m, "x2")).unwrap();
        assert_eq!(x2.verdict, RadicalVerdict::InRadicalEvidence);
    }

    #[test]
    fn zero_map_excludes_everything() {
        let m = endo(&["x1", "x2"], 1);
        let scan = radical_scan(&m, 2, 3, &[], ScanOptions::default()).unwrap();
        assert!(scan
            .candidates
            .iter()
            .all(|c| c.verdict == RadicalVerdict::Excluded { m: 1 }));
        let r = mz_spot_check(&m, 2, 4, 1, ScanOptions::default()).unwrap();
        assert!(r.premise.is_empty() && r.passed);
        let p = check_prop27(&m, Some(&[poly(&m, "x1")]), 3, 3).unwrap();
        assert_eq!(p.status, Prop27Status::Violated);
    }

    #[test]
    fn prop43_radicals_satisfy_the_condition() {
        let a = endo(&["z*x1 + x2", "z*x2", "2*x3"], 3);
        let r = check_prop27(&a, Some(&[poly(&a, "x2"), poly(&a, "x3")]), 4, 6).unwrap();
        assert_eq!(r.status, Prop27Status::SatisfiedAtBound, "{r:?}");
        let b = endo(&["2*x1 + x2", "2*x2", "z*x3"], 3);
        let r = check_prop27(&b, Some(&[poly(&b, "x1"), poly(&b, "x2")]), 4, 6).unwrap();
        assert_eq!(r.status, Prop27Status::SatisfiedAtBound, "{r:?}");
        let r = check_prop27(&b, None, 4, 6).unwrap();
        assert_eq!(r.status, Prop27Status::SatisfiedAtBound, "{r:?}");
    }

    #[test]
    fn triple_jordan_tail_window() {
        let k = Conductor::new(1).unwrap();
        let m = triple_jordan(&Scalar::one(&k)).unwrap();
        let r = mz_spot_check(&m, 1, 5, 1, ScanOptions::default()).unwrap();
        assert!(r.premise.contains(&poly(&m, "x3")));
        assert!(r.passed, "{:?}", r.violations);
    }

    #[test]
    fn conjecture_explorer_containment() {
        let k = Conductor::new(1).unwrap();
        let r = conjecture45_explore(&Scalar::one(&k), 5, 6).unwrap();
        assert!(r.v_minus_evidence.is_empty());
        let k2 = Conductor::new(2).unwrap();
        let r = conjecture45_explore(&Scalar::from_integer(&k2, -1), 5, 6).unwrap();
        assert!(r.v_minus_evidence.is_empty());
        let r = conjecture45_explore(&Scalar::one(&k), 0, 6).unwrap();
        assert_eq!(r.candidates, 0);
    }
}
