mod common;

use common::*;
use edlab::image::{compare_images, ideal_slice_test, member, MembershipStatus};
use edlab::maps::{Map, MapKind};
use edlab::mzlab::{
    check_prop27, claim_ids, conjecture45_explore, in_conjectured_space, mz_spot_check, radical_scan, triple_jordan,
    verify_claim, ClaimParams, Prop27Status, ScanOptions,
};
use edlab::polyring::{monomials_up_to, Monomial};
use edlab::{parse_polynomial, Error, Polynomial, Scalar};

fn params() -> ClaimParams {
    ClaimParams::default()
}

fn jordan_z3() -> Map {
    Map::parse(MapKind::Endomorphism, &["z*x1 + x2", "z*x2"], &field(3)).unwrap()
}

fn status(map: &Map, m: &Monomial) -> MembershipStatus {
    let p = Polynomial::monomial(map.field(), m.clone());
    member(map, &p, m.degree(), None).unwrap().status
}

#[test]
fn every_registered_claim_passes_on_its_default_instance() {
    for id in claim_ids() {
        let r = verify_claim(id, &params()).unwrap();
        assert!(!r.checks.is_empty(), "{id} ran no checks");
        assert!(!r.exploratory, "{id}");
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).map(|c| &c.name).collect();
        assert!(r.passed, "{id} failed: {failed:?}");
    }
}

#[test]
fn unknown_claim_is_an_error() {
    assert!(matches!(verify_claim("thm9.9", &params()), Err(Error::UnknownClaim(_))));
}

#[test]
fn jordan_block_at_cube_root_membership_pattern() {
    // x1^{i1} x2^{i2} with i2 ≥ 1 always in; pure powers in iff 3 ∤ i1
    let map = jordan_z3();
    for m in monomials_up_to(2, 9) {
        let s = status(&map, &m);
        let [i1, i2] = [m.exps()[0], m.exps()[1]];
        let expected = if i2 >= 1 || i1 % 3 != 0 {
            MembershipStatus::In
        } else {
            MembershipStatus::NotInCertified
        };
        assert_eq!(s, expected, "{m}");
    }
}

#[test]
fn resonant_eigenvalue_violates_the_hypothesis() {
    let p = ClaimParams {
        conductor: Some(3),
        lambdas: vec!["z".into(), "z".into()],
        ..params()
    };
    assert!(matches!(
        verify_claim("thm2.1", &p),
        Err(Error::HypothesisViolation { .. })
    ));
    let r = verify_claim(
        "thm2.1",
        &ClaimParams {
            allow_out_of_hypothesis: true,
            ..p
        },
    )
    .unwrap();
    assert!(r.exploratory);
    // 1 - φ kills 1 and the cube of x1 escapes the image
    assert!(!r.passed);
}

#[test]
fn unipotent_triple_jordan_parity_table() {
    // odd x2-exponent: in iff i3 ≥ i1; even: in iff i3 ≥ i1 + 1
    let map = triple_jordan(&Scalar::one(&field(1))).unwrap();
    for m in monomials_up_to(3, 5) {
        let [i1, i2, i3] = [m.exps()[0], m.exps()[1], m.exps()[2]];
        let inside = if i2 % 2 == 1 { i3 >= i1 } else { i3 > i1 };
        let expected = if inside {
            MembershipStatus::In
        } else {
            MembershipStatus::NotInCertified
        };
        assert_eq!(status(&map, &m), expected, "{m}");
    }
}

#[test]
fn triple_jordan_image_matches_the_derivation() {
    let k = field(1);
    let delta = triple_jordan(&Scalar::one(&k)).unwrap();
    let d = Map::parse(MapKind::Derivation, &["x2 - 1/2*x3", "x3", "0"], &k).unwrap();
    let cmp = compare_images(&delta, &d, 5, None).unwrap();
    assert!(cmp.equal, "first discrepancy {:?}", cmp.first_discrepancy);
}

#[test]
fn cross_resonant_jordan_pairs_break_the_ideal_containment() {
    // φ = (x1 + x2, x2, x3 + x4, x4): δ(x1x3) = -(x1x4 + x2x3 + x2x4) and
    // δ(x1x4) = δ(x2x3) = -x2x4, so x1x4 + x2x3 is in the image but x1x4 is
    // not, although x4 lies in the ideal (x2, x4) the containment step uses
    let k = field(1);
    let map = Map::parse(MapKind::Endomorphism, &["x1 + x2", "x2", "x3 + x4", "x4"], &k).unwrap();
    let p = |s: &str| parse_polynomial(s, 4, &k).unwrap();
    assert_eq!(map.apply(&p("x1*x3")), p("-x1*x4 - x2*x3 - x2*x4"));
    assert_eq!(map.apply(&p("x1*x4")), p("-x2*x4"));
    assert_eq!(map.apply(&p("x2*x3")), p("-x2*x4"));
    assert_eq!(
        member(&map, &p("x1*x4"), 2, None).unwrap().status,
        MembershipStatus::NotInCertified
    );
    assert_eq!(
        member(&map, &p("x1*x4 + x2*x3"), 2, None).unwrap().status,
        MembershipStatus::In
    );

    let r = verify_claim(
        "thm3.1.1",
        &ClaimParams {
            conductor: Some(1),
            lambdas: vec!["1".into(), "1".into()],
            ..params()
        },
    )
    .unwrap();
    assert!(!r.passed);
    assert!(r.notes.iter().any(|n| n.contains("multiplicatively resonant")));
    let mz = r.checks.iter().find(|c| c.name == "mz-spot-check").unwrap();
    assert!(mz.passed, "the MZ property itself survives: {}", mz.detail);
    assert!(r.checks.iter().any(|c| !c.passed && c.name == "ideal-in-image"));
}

#[test]
fn separated_eigenvalues_keep_the_ideal_containment() {
    let r = verify_claim(
        "thm3.1.1",
        &ClaimParams {
            conductor: Some(1),
            lambdas: vec!["2".into(), "3".into()],
            ..params()
        },
    )
    .unwrap();
    assert!(r.passed);
    assert!(r.notes.is_empty());
}

#[test]
fn radical_of_mixed_jordan_diagonal_maps() {
    // (z, 2): radical (x2, x3); (2, z): radical (x1, x2)
    let k = field(3);
    for (images, gens) in [
        (["z*x1 + x2", "z*x2", "2*x3"], ["x2", "x3"]),
        (["2*x1 + x2", "2*x2", "z*x3"], ["x1", "x2"]),
    ] {
        let map = Map::parse(MapKind::Endomorphism, &images, &k).unwrap();
        let scan = radical_scan(&map, 4, 6, &[], ScanOptions::default()).unwrap();
        let g: Vec<Polynomial> = gens.iter().map(|s| parse_polynomial(s, 3, &k).unwrap()).collect();
        let expected: Vec<Monomial> = monomials_up_to(3, 4)
            .into_iter()
            .filter(|m| !m.is_one() && g.iter().any(|g| g.leading().unwrap().0.divides(m)))
            .collect();
        let evidence: Vec<Monomial> = scan.evidence_monomials().into_iter().collect();
        let mut expected_sorted = expected.clone();
        expected_sorted.sort();
        assert_eq!(evidence, expected_sorted, "{images:?}");
        let p27 = check_prop27(&map, Some(&g), 4, 6).unwrap();
        assert_eq!(p27.status, Prop27Status::SatisfiedAtBound);
    }
}

#[test]
fn zero_map_has_an_empty_premise() {
    let k = field(1);
    let zero = endo(vec![Polynomial::var(&k, 2, 0), Polynomial::var(&k, 2, 1)]);
    let r = mz_spot_check(&zero, 2, 4, 1, ScanOptions::default()).unwrap();
    assert!(r.premise.is_empty());
    assert_eq!(r.pairs_checked, 0);
    assert!(r.passed);
}

#[test]
fn conjectured_space_is_inside_the_radical_evidence() {
    for (n, lam) in [(1, "1"), (2, "-1"), (3, "z")] {
        let k = field(n);
        let l = edlab::parse_scalar(lam, &k).unwrap();
        let r = conjecture45_explore(&l, 4, 6).unwrap();
        assert!(r.v_minus_evidence.is_empty(), "λ = {lam}: {:?}", r.v_minus_evidence);
        assert!(r.evidence_minus_v.iter().all(|m| !in_conjectured_space(m)));
    }
    let r = conjecture45_explore(&Scalar::one(&field(1)), 0, 6).unwrap();
    assert_eq!(r.candidates, 0);
    assert!(r.passed);
}

#[test]
fn contains_one_when_an_eigenvalue_one_has_a_constant() {
    let k = field(1);
    let map = Map::parse(MapKind::Endomorphism, &["x1 + 1", "2*x2"], &k).unwrap();
    let one = Polynomial::one(&k, 2);
    assert_eq!(member(&map, &one, 0, None).unwrap().status, MembershipStatus::In);
    let cmp = ideal_slice_test(&map, &[one], 3, None).unwrap();
    assert!(cmp.equal);
}
