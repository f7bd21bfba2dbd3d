mod common;

use std::collections::BTreeSet;

use common::*;
use edlab::echelon::Echelon;
use edlab::image::{member, ImageOptions, ImageOracle, MembershipStatus};
use edlab::maps::{conjugate, Map};
use edlab::mzlab::{radical_scan, RadicalVerdict, ScanOptions};
use edlab::normalize::{linearize_triangular_derivation, shift_to_origin, triangularize_linear_part};
use edlab::polyring::{monomials_of_degree, Monomial};
use edlab::scalar::resonance::{resonance_exists_bounded, resonance_exists_structured, FactoredEigenvalue};
use edlab::{parse_polynomial, Error, Matrix, Polynomial, Scalar};
use proptest::prelude::*;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cases(128))]

    #[test]
    fn field_laws(n in conductor(), a in raw_scalar(), b in raw_scalar(), c in raw_scalar()) {
        let k = field(n);
        let (a, b, c) = (scalar_from(&k, &a), scalar_from(&k, &b), scalar_from(&k, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn root_of_unity_order_is_minimal(n in conductor(), j in 0i64..24, sign in prop::bool::ANY, other in raw_scalar()) {
        let k = field(n);
        let mut w = Scalar::root_of_unity(&k, j);
        if sign {
            w = -w;
        }
        for a in [w, scalar_from(&k, &other)] {
            if let Some(s) = a.root_of_unity_order() {
                prop_assert!(a.pow(u64::from(s)).is_one());
                for t in 1..s {
                    prop_assert!(!a.pow(u64::from(t)).is_one());
                }
            } else if !a.is_zero() {
                // orders of roots of unity in Q(ζ_N) divide 2N
                prop_assert!(!a.pow(2 * u64::from(n)).is_one());
            }
        }
    }

    #[test]
    fn ring_axioms(a in raw_poly(3, 4), b in raw_poly(3, 4), c in raw_poly(3, 4), n in conductor()) {
        let k = field(n);
        let (a, b, c) = (poly_from(&k, 3, 3, &a), poly_from(&k, 3, 3, &b), poly_from(&k, 3, 3, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(&k, 3), a.clone());
    }

    #[test]
    fn substitute_identity_images(a in raw_poly(4, 6), n in conductor()) {
        let k = field(n);
        let a = poly_from(&k, 3, 4, &a);
        let vars: Vec<Polynomial> = (0..3).map(|i| Polynomial::var(&k, 3, i)).collect();
        prop_assert_eq!(a.substitute(&vars), a);
    }

    #[test]
    fn grlex_is_monomial_order(a in prop::collection::vec(0u32..4, 3), b in prop::collection::vec(0u32..4, 3), c in prop::collection::vec(0u32..4, 3)) {
        let (a, b, c) = (Monomial::new(a), Monomial::new(b), Monomial::new(c));
        if a < b {
            prop_assert!(c.mul(&a) < c.mul(&b));
            prop_assert!(a.degree() < b.degree() || (a.degree() == b.degree() && a.exps() < b.exps()));
        }
        prop_assert!(Monomial::one(3) <= a);
    }

    #[test]
    fn print_parse_round_trip(a in raw_poly(3, 5), n in conductor()) {
        let k = field(n);
        let a = poly_from(&k, 3, 3, &a);
        let printed = a.to_string();
        let back = parse_polynomial(&printed, 3, &k).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn ederivation_product_rule(imgs in prop::collection::vec(raw_poly(2, 3), 3), a in raw_poly(2, 3), b in raw_poly(2, 3), n in conductor()) {
        let k = field(n);
        let images: Vec<Polynomial> = imgs.iter().map(|r| poly_from(&k, 3, 2, r)).collect();
        let delta = endo(images);
        let (a, b) = (poly_from(&k, 3, 2, &a), poly_from(&k, 3, 2, &b));
        let (da, db) = (delta.apply(&a), delta.apply(&b));
        let rhs = &(&(&da * &b) + &(&a * &db)) - &(&da * &db);
        prop_assert_eq!(delta.apply(&(&a * &b)), rhs);
        prop_assert!(delta.apply(&Polynomial::one(&k, 3)).is_zero());
    }

    #[test]
    fn derivation_leibniz(coeffs in prop::collection::vec(raw_poly(2, 3), 3), a in raw_poly(3, 3), b in raw_poly(3, 3), n in conductor()) {
        let k = field(n);
        let d = Map::derivation(coeffs.iter().map(|r| poly_from(&k, 3, 2, r)).collect()).unwrap();
        let (a, b) = (poly_from(&k, 3, 3, &a), poly_from(&k, 3, 3, &b));
        let rhs = &(&d.apply(&a) * &b) + &(&a * &d.apply(&b));
        prop_assert_eq!(d.apply(&(&a * &b)), rhs);
        prop_assert!(d.apply(&Polynomial::one(&k, 3)).is_zero());
    }

    #[test]
    fn linear_maps_preserve_degree(imgs in prop::collection::vec(raw_poly(1, 3), 3), p in raw_poly(3, 6), n in conductor()) {
        let k = field(n);
        let images: Vec<Polynomial> = imgs.iter().map(|r| poly_from(&k, 3, 1, r).homogeneous_component(1)).collect();
        let delta = endo(images);
        let p = poly_from(&k, 3, 3, &p);
        for d in 0..=3 {
            prop_assert_eq!(delta.apply(&p).homogeneous_component(d), delta.apply(&p.homogeneous_component(d)));
        }
    }

    #[test]
    fn affine_maps_respect_filtration(imgs in prop::collection::vec(raw_poly(1, 3), 3), p in raw_poly(3, 6), n in conductor()) {
        let k = field(n);
        let delta = endo(imgs.iter().map(|r| poly_from(&k, 3, 1, r)).collect());
        let p = poly_from(&k, 3, 3, &p);
        let dp = delta.apply(&p);
        prop_assert!(dp.degree().unwrap_or(0) <= p.degree().unwrap_or(0));
    }

    #[test]
    fn conjugation_is_functorial(
        imgs in prop::collection::vec(raw_poly(2, 3), 2),
        s in prop::collection::vec(-2i64..=2, 3),
        t in prop::collection::vec(-2i64..=2, 3),
        c in raw_poly(2, 2),
        derivation in prop::bool::ANY,
    ) {
        let k = field(3);
        let polys: Vec<Polynomial> = imgs.iter().map(|r| poly_from(&k, 2, 2, r)).collect();
        let m = if derivation { Map::derivation(polys).unwrap() } else { endo(polys) };
        let sigma = linear_automorphism(&invertible_from(&k, 2, &s[..1], &s[1..2], &s[2..]));
        // x2 ↦ x2 + c(x1), a nonlinear automorphism
        let tail = poly_from(&k, 2, 2, &c);
        let tail = Polynomial::from_terms(&k, 2, tail.terms().filter(|(m, _)| m.exps()[1] == 0).map(|(m, c)| (m.clone(), c.clone())));
        let tau = edlab::PolyAutomorphism::elementary(1, &int(&k, 1), &tail).unwrap()
            .compose(&linear_automorphism(&invertible_from(&k, 2, &t[..1], &t[1..2], &t[2..])));
        let lhs = conjugate(&conjugate(&m, &sigma).unwrap(), &tau).unwrap();
        prop_assert_eq!(lhs, conjugate(&m, &sigma.compose(&tau)).unwrap());
    }

    #[test]
    fn echelon_is_canonical(vs in prop::collection::vec(raw_poly(3, 4), 1..8), seed in any::<u64>()) {
        let k = field(4);
        let vs: Vec<Polynomial> = vs.iter().map(|r| poly_from(&k, 3, 3, r)).collect();
        let mut a = Echelon::new(&k, 3, false);
        for v in &vs {
            a.insert(v, None);
        }
        a.finalize();
        // insertion order and scaling do not change the reduced basis
        let mut shuffled = vs.clone();
        let len = shuffled.len();
        for i in (1..len).rev() {
            shuffled.swap(i, (seed as usize).wrapping_add(i * 7919) % (i + 1));
        }
        let mut b = Echelon::new(&k, 3, false);
        for (i, v) in shuffled.iter().enumerate() {
            b.insert(&v.scale(&int(&k, i as i64 + 2)), None);
        }
        b.finalize();
        let basis_a: Vec<Polynomial> = a.basis().map(|(_, v)| v.clone()).collect();
        let basis_b: Vec<Polynomial> = b.basis().map(|(_, v)| v.clone()).collect();
        prop_assert_eq!(&basis_a, &basis_b);
        let pivots: BTreeSet<Monomial> = a.pivot_monomials().cloned().collect();
        for (p, v) in a.basis() {
            prop_assert_eq!(v.leading().map(|(m, c)| (m.clone(), c.is_one())), Some((p.clone(), true)));
            // reducing against the other rows leaves the vector unchanged
            for q in pivots.iter().filter(|q| *q != p) {
                prop_assert!(v.coeff(q).is_none());
            }
        }
        prop_assert_eq!(a.rank() + a.kernel_dim(), vs.len());
        for v in &vs {
            prop_assert!(a.reduce(v).residue.is_zero());
        }
    }

    #[test]
    fn rank_nullity(diag in prop::collection::vec(0i64..4, 2), off in prop::collection::vec(-2i64..=2, 3), j in 0i64..3, e in 0u32..5) {
        // φ = eigenvalues ζ_3^j·d_i on an upper-triangular linear part; zeros
        // and roots of unity give nontrivial kernels
        let k = field(3);
        let z = Scalar::root_of_unity(&k, j);
        let x = |i| Polynomial::var(&k, 2, i);
        let images = vec![
            &x(0).scale(&z.scale_int(diag[0])) + &x(1).scale(&int(&k, off[0])),
            x(1).scale(&Scalar::root_of_unity(&k, off[1]).scale_int(diag[1])),
        ];
        let delta = endo(images);
        let mut oracle = ImageOracle::new(&delta, ImageOptions::default());
        let basis = oracle.basis(e);
        let slice = &basis.slices[e as usize];
        let monos = monomials_of_degree(2, e);
        prop_assert_eq!(slice.domain_dim, monos.len());
        prop_assert_eq!(slice.dimension + slice.kernel_dim.unwrap(), monos.len());
        // independent oracle: the matrix of δ on V_e
        let rows: Vec<Vec<Scalar>> = monos
            .iter()
            .map(|m| {
                let img = delta.apply(&Polynomial::monomial(&k, m.clone()));
                monos.iter().map(|c| img.coeff_or_zero(c)).collect()
            })
            .collect();
        let mat = Matrix::from_rows(&k, rows).unwrap();
        prop_assert_eq!(slice.dimension, mat.rank());
        let ech = oracle.graded_slice(e);
        prop_assert_eq!(ech.kernel().len(), slice.kernel_dim.unwrap());
        for w in ech.kernel() {
            prop_assert!(!w.is_zero());
            prop_assert!(delta.apply(&w).is_zero());
        }
    }

    #[test]
    fn conjugation_covariance_on_slices(imgs in prop::collection::vec(raw_poly(1, 3), 2), s in prop::collection::vec(-2i64..=2, 3), e in 1u32..4) {
        let k = field(3);
        let images: Vec<Polynomial> = imgs.iter().map(|r| poly_from(&k, 2, 1, r).homogeneous_component(1)).collect();
        let delta = endo(images);
        let sigma = linear_automorphism(&invertible_from(&k, 2, &s[..1], &s[1..2], &s[2..]));
        let conj = conjugate(&delta, &sigma).unwrap();
        let mut left = ImageOracle::new(&conj, ImageOptions { slack: None, witnesses: false });
        let mut right = ImageOracle::new(&delta, ImageOptions { slack: None, witnesses: false });
        let mut moved = Echelon::new(&k, 2, false);
        for v in right.basis_at(e) {
            moved.insert(&sigma.apply_inverse(&v), None);
        }
        moved.finalize();
        let moved: Vec<Polynomial> = moved.basis().map(|(_, v)| v.clone()).collect();
        prop_assert_eq!(left.basis_at(e), moved);
    }

    #[test]
    fn images_of_degree_preserving_maps_are_members(imgs in prop::collection::vec(raw_poly(1, 3), 3), p in raw_poly(3, 5), n in conductor()) {
        let k = field(n);
        let images: Vec<Polynomial> = imgs.iter().map(|r| poly_from(&k, 3, 1, r).homogeneous_component(1)).collect();
        let delta = endo(images);
        let p = poly_from(&k, 3, 3, &p);
        let q = delta.apply(&p);
        let v = member(&delta, &q, 3, None).unwrap();
        prop_assert_eq!(v.status, MembershipStatus::In);
        prop_assert_eq!(delta.apply(&v.witness.unwrap()), q);
    }
}

proptest! {
    #![proptest_config(cases(100))]

    #[test]
    fn affine_images_are_found_within_slack(imgs in prop::collection::vec(raw_poly(1, 3), 2), p in raw_poly(2, 4)) {
        let k = field(1);
        let delta = endo(imgs.iter().map(|r| poly_from(&k, 2, 1, r)).collect());
        let p = poly_from(&k, 2, 2, &p);
        let q = delta.apply(&p);
        let v = member(&delta, &q, 2, Some(0)).unwrap();
        prop_assert_eq!(v.status, MembershipStatus::In);
        prop_assert_eq!(delta.apply(&v.witness.unwrap()), q);
    }

    #[test]
    fn structured_and_bounded_resonance_agree(parts in prop::collection::vec((prop::sample::select(vec![(1i64, 1i64), (2, 1), (1, 2), (3, 1), (4, 1), (1, 4), (2, 3), (3, 2), (9, 1), (1, 3)]), 0i64..12), 1..4)) {
        let k = field(12);
        let parts: Vec<FactoredEigenvalue> = parts.iter().map(|&((p, q), j)| FactoredEigenvalue::new(rat(p, q), j)).collect();
        let values: Vec<Scalar> = parts.iter().map(|f| f.to_scalar(&k)).collect();
        let bounded = resonance_exists_bounded(&values, 8);
        let structured = resonance_exists_structured(&k, &parts).unwrap();
        let holds = |w: &[u32]| {
            let p = values.iter().zip(w).fold(Scalar::one(&k), |acc, (l, &e)| &acc * &l.pow(u64::from(e)));
            p.is_one() && w.iter().any(|&e| e > 0)
        };
        if let Some(w) = &bounded {
            prop_assert!(holds(w));
            prop_assert!(structured.is_some());
        }
        match &structured {
            Some(w) => prop_assert!(holds(w)),
            None => prop_assert!(bounded.is_none()),
        }
    }

    #[test]
    fn resonance_with_a_root_of_unity_forces_one(j in 0i64..12, q in prop::sample::select(vec![(1i64, 1i64), (2, 1), (1, 2), (3, 1)]), l in 0i64..12) {
        let k = field(12);
        let l1 = Scalar::root_of_unity(&k, j);
        let l2 = FactoredEigenvalue::new(rat(q.0, q.1), l).to_scalar(&k);
        let related = (1..=8u64).any(|r1| (1..=8u64).any(|r2| (&l1.pow(r1) * &l2.pow(r2)).is_one()));
        prop_assert!(l1.root_of_unity_order().is_some());
        if related {
            prop_assert!(l2.root_of_unity_order().is_some());
        }
    }

    #[test]
    fn shift_to_origin_clears_constants(lams in prop::collection::vec(prop::sample::select(vec![2i64, 3, -1, -2, 5]), 3), tails in prop::collection::vec(raw_poly(2, 3), 3)) {
        let k = field(1);
        let n = 3;
        let images: Vec<Polynomial> = (0..n)
            .map(|i| {
                // the tail of x_i only involves later variables
                let t = poly_from(&k, n, 2, &tails[i]);
                let t = Polynomial::from_terms(&k, n, t.terms().filter(|(m, _)| m.exps()[..=i].iter().all(|&e| e == 0)).map(|(m, c)| (m.clone(), c.clone())));
                &Polynomial::var(&k, n, i).scale(&int(&k, lams[i])) + &t
            })
            .collect();
        let map = endo(images);
        let r = shift_to_origin(&map).unwrap();
        prop_assert!(r.verify(&map).unwrap());
        let Map::E(d) = &r.normalized else { unreachable!() };
        for f in d.phi().images() {
            prop_assert!(f.constant_term().is_zero());
        }
    }

    #[test]
    fn linearization_is_diagonal_or_resonant(a in prop::collection::vec(prop::sample::select(vec![(1i64, 1i64), (2, 1), (3, 1), (-1, 1), (1, 2), (5, 2), (-3, 2)]), 3), tails in prop::collection::vec(raw_poly(3, 3), 3)) {
        let k = field(1);
        let n = 3;
        let a: Vec<Scalar> = a.iter().map(|&(p, q)| Scalar::from_rational(&k, rat(p, q))).collect();
        let coeffs: Vec<Polynomial> = (0..n)
            .map(|i| {
                let t = poly_from(&k, n, 3, &tails[i]);
                let t = Polynomial::from_terms(&k, n, t.terms().filter(|(m, _)| m.exps()[i..].iter().all(|&e| e == 0)).map(|(m, c)| (m.clone(), c.clone())));
                &Polynomial::var(&k, n, i).scale(&a[i]) + &t
            })
            .collect();
        let map = Map::derivation(coeffs).unwrap();
        match linearize_triangular_derivation(&map) {
            Ok(r) => {
                prop_assert!(r.verify(&map).unwrap());
                let Map::D(d) = &r.normalized else { unreachable!() };
                for (i, c) in d.coeffs().iter().enumerate() {
                    prop_assert_eq!(c, &Polynomial::var(&k, n, i).scale(&a[i]));
                }
            }
            Err(Error::ResonantObstruction { k: idx, exponent }) => {
                let sum = exponent.iter().zip(&a).fold(Scalar::zero(&k), |acc, (&l, ai)| &acc + &ai.scale_int(i64::from(l)));
                prop_assert_eq!(&a[idx - 1], &sum);
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn triangularization_conjugates(d in prop::collection::vec(prop::sample::select(vec![1i64, 2, -1, 3]), 3), u in prop::collection::vec(-2i64..=2, 3), s in prop::collection::vec(-2i64..=2, 3)) {
        let k = field(1);
        let mut upper = Matrix::zero(&k, 3, 3);
        for (i, &di) in d.iter().enumerate() {
            upper.set(i, i, int(&k, di));
        }
        upper.set(0, 1, int(&k, u[0]));
        upper.set(0, 2, int(&k, u[1]));
        upper.set(1, 2, int(&k, u[2]));
        let p = invertible_from(&k, 3, &s, &s[1..], &[1, -1, 1]);
        let a = p.mul(&upper).mul(&p.inverse().unwrap());
        let t = triangularize_linear_part(&a).unwrap();
        prop_assert_eq!(t.t.mul(&t.upper), a.mul(&t.t));
        prop_assert!(!t.t.determinant().is_zero());
        prop_assert!(t.upper.is_upper_triangular());
        let mut eig: Vec<String> = t.eigenvalues.iter().map(ToString::to_string).collect();
        let mut want: Vec<String> = d.iter().map(ToString::to_string).collect();
        eig.sort();
        want.sort();
        prop_assert_eq!(eig, want);
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn excluded_verdicts_are_certified(j in 0i64..3, mu in prop::sample::select(vec![2i64, -1, 3]), jordan in prop::bool::ANY) {
        let k = field(3);
        let lam = Scalar::root_of_unity(&k, j);
        let x = |i| Polynomial::var(&k, 2, i);
        let first = if jordan { &x(0).scale(&lam) + &x(1) } else { x(0).scale(&lam) };
        let delta = endo(vec![first, x(1).scale(&int(&k, mu))]);
        let scan = radical_scan(&delta, 2, 4, &[], ScanOptions::default()).unwrap();
        for c in &scan.candidates {
            if let RadicalVerdict::Excluded { m } = c.verdict {
                let p = c.candidate.pow(m);
                let v = member(&delta, &p, p.degree().unwrap(), None).unwrap();
                prop_assert_eq!(v.status, MembershipStatus::NotInCertified);
            }
        }
    }
}
