use proptest::prelude::*;

use vaisman_core::catalog::{complex_structure, make_gh, make_gh_psi, AlgebraId, Branch, DeltaParam, EpsilonVector};
use vaisman_core::hermitian::is_integrable;
use vaisman_core::io::{algebra_from_json, algebra_to_json};
use vaisman_core::poly::Poly;
use vaisman_core::scalar::{q, qi};
use vaisman_core::search::extract_delta;
use vaisman_core::{ce_differential, KForm, Matrix, Q};

fn rational() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    rational().prop_filter("k != 0", |x| *x != qi(0))
}

fn signs(m: usize) -> impl Strategy<Value = Vec<i8>> {
    proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], m)
}

fn weights(p: usize, q_: usize) -> impl Strategy<Value = Matrix<Q>> {
    proptest::collection::vec(rational(), (2 * p + 1) * q_)
        .prop_map(move |v| Matrix::from_fn(2 * p + 1, q_, |r, c| v[r * q_ + c].clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gh_psi_is_unimodular_lie_algebra(w in (0usize..=1, 1usize..=2).prop_flat_map(|(p, q_)| (Just(p), Just(q_), weights(p, q_)))) {
        let (p, q_, w) = w;
        let g = make_gh_psi(p, q_, &w).unwrap();
        prop_assert!(g.check_jacobi().ok);
        prop_assert!(g.is_unimodular());
        let text = algebra_to_json(&g).to_string();
        prop_assert_eq!(algebra_from_json(&text).unwrap(), g);
    }

    #[test]
    fn family_member_round_trips(k in nonzero_rational(), l in rational(), eps in signs(2)) {
        let id = AlgebraId::Gh(2);
        let g = make_gh(2).unwrap();
        let delta = DeltaParam::new(k.clone(), l.clone()).unwrap();
        let e = EpsilonVector::new(eps.clone()).unwrap();
        let j = complex_structure(&id, &delta, Some(&e), Branch::V).unwrap();
        prop_assert!(is_integrable(&g, &j).unwrap());
        let back = extract_delta(&id, j.matrix(), 0.0).unwrap();
        prop_assert_eq!(&back.k, &k);
        prop_assert_eq!(&back.l, &l);
        prop_assert_eq!(back.eps.as_ref().map(|e| e.signs().to_vec()), Some(eps));
        prop_assert_eq!(back.complex_structure(&id).unwrap(), j.matrix().clone());
    }

    #[test]
    fn d_squared_vanishes(coeffs in proptest::collection::vec(rational(), 6), w in weights(0, 2)) {
        let g = make_gh_psi(0, 2, &w).unwrap();
        let alpha = KForm::from_covector(&coeffs);
        let d1 = ce_differential(&g, &alpha).unwrap();
        prop_assert!(ce_differential(&g, &d1).unwrap().is_zero());
    }

    #[test]
    fn change_of_basis_preserves_axioms(entries in proptest::collection::vec(-2i64..=2, 16)) {
        let p = Matrix::from_fn(4, 4, |r, c| qi(entries[r * 4 + c]) + if r == c { qi(5) } else { qi(0) });
        prop_assume!(p.det() != qi(0));
        let g = make_gh(1).unwrap();
        let h = g.change_basis(&p).unwrap();
        prop_assert!(h.check_jacobi().ok);
        prop_assert!(h.is_unimodular());
        let back = h.change_basis(&p.inverse().unwrap()).unwrap();
        prop_assert_eq!(back.structure_tensor(), g.structure_tensor());
    }

    #[test]
    fn polynomial_ring_laws(a in -5i64..=5, b in -5i64..=5, x in rational(), y in rational()) {
        let (u, v) = (Poly::var(2, 0), Poly::var(2, 1));
        let p = &(&u * &Poly::constant(2, qi(a))) + &v;
        let r = &(&v * &v) - &Poly::constant(2, qi(b));
        let at = [x, y];
        prop_assert_eq!((&p * &r).eval(&at), p.eval(&at) * r.eval(&at));
        prop_assert_eq!((&p + &r).eval(&at), p.eval(&at) + r.eval(&at));
        prop_assert!((&(&p * &r) - &(&r * &p)).is_zero());
    }
}
