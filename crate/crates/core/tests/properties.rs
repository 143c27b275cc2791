use proptest::prelude::*;

use virasoro_core::classify::roundtrip_check;
use virasoro_core::family::{check_product_condition, vr_contains, DEFAULT_MU_TOL};
use virasoro_core::solver::closed_form;
use virasoro_core::virasoro::{vir_bracket, VirasoroElement};
use virasoro_core::witt::{bracket, omega, tau, tau_hom};
use virasoro_core::{Backend, Coefficient, LaurentPoly, RVector, VectorField};

const E: Backend = Backend::Exact;

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i64..=4, -5i64..=5, 1i64..=3), 0..5).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(e, p, q)| LaurentPoly::monomial(e, Coefficient::rational(p, q).unwrap()))
            .fold(LaurentPoly::zero(E), |acc, m| &acc + &m)
    })
}

fn field() -> impl Strategy<Value = VectorField> {
    poly().prop_map(VectorField::new)
}

fn vir() -> impl Strategy<Value = VirasoroElement> {
    (field(), -3i64..=3).prop_map(|(f, k)| VirasoroElement::new(f, Coefficient::from_int(E, k)).unwrap())
}

fn br(x: &VectorField, y: &VectorField) -> VectorField {
    bracket(x, y).unwrap()
}

fn add(x: &VectorField, y: &VectorField) -> VectorField {
    x.checked_add(y).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(f in poly(), g in poly(), h in poly()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &LaurentPoly::one(E), f.clone());
    }

    #[test]
    fn theta_is_a_derivation(f in poly(), g in poly()) {
        prop_assert_eq!((&f * &g).theta(), &(&f.theta() * &g) + &(&f * &g.theta()));
    }

    #[test]
    fn json_roundtrip(f in poly()) {
        let s = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<LaurentPoly>(&s).unwrap(), f);
    }

    #[test]
    fn witt_bracket_is_a_lie_bracket(x in field(), y in field(), z in field()) {
        prop_assert_eq!(br(&x, &y), br(&y, &x).scale(&Coefficient::from_int(E, -1)).unwrap());
        prop_assert_eq!(br(&x, &add(&y, &z)), add(&br(&x, &y), &br(&x, &z)));
        let jacobi = add(&add(&br(&x, &br(&y, &z)), &br(&y, &br(&z, &x))), &br(&z, &br(&x, &y)));
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn virasoro_jacobi(x in vir(), y in vir(), z in vir()) {
        let b = |u: &VirasoroElement, v: &VirasoroElement| vir_bracket(u, v).unwrap();
        let sum = b(&x, &b(&y, &z))
            .checked_add(&b(&y, &b(&z, &x)))
            .unwrap()
            .checked_add(&b(&z, &b(&x, &y)))
            .unwrap();
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn omega_is_an_involutive_homomorphism(x in field(), y in field()) {
        prop_assert_eq!(omega(&omega(&x)), x.clone());
        prop_assert_eq!(omega(&br(&x, &y)), br(&omega(&x), &omega(&y)));
    }

    #[test]
    fn tau_scaling(x in field(), y in field(), s in 1i64..=3) {
        let lhs = br(&tau_hom(s, &x).unwrap(), &tau_hom(s, &y).unwrap());
        prop_assert_eq!(lhs, tau_hom(s, &br(&x, &y)).unwrap());
        let lhs = br(&tau(s, &x).unwrap(), &tau(s, &y).unwrap());
        let rhs = tau(s, &br(&x, &y)).unwrap().scale(&Coefficient::from_int(E, s * s)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn membership_matches_product_condition(
        r in prop::collection::vec(1i64..=4, 1..=3),
        tail in 0usize..=2,
        a in prop::collection::vec((-9i64..=9, 1i64..=4), 5),
    ) {
        let k = r.len();
        let mut entries = r;
        entries.extend(std::iter::repeat_n(-1, tail));
        let Ok(r) = RVector::new(k, entries) else { return Ok(()) };
        let a: Vec<Coefficient> = a[..r.n()].iter().map(|&(p, q)| Coefficient::rational(p, q).unwrap()).collect();
        let z: Vec<_> = a.iter().map(Coefficient::to_complex).collect();
        let distinct = (0..z.len()).all(|i| z[i].norm() > 0.0 && (i + 1..z.len()).all(|j| z[i] != z[j]));
        prop_assume!(distinct);
        prop_assert_eq!(
            vr_contains(&r, &a, DEFAULT_MU_TOL).unwrap(),
            check_product_condition(&r, &a, DEFAULT_MU_TOL).unwrap()
        );
    }

    #[test]
    fn closed_form_points_roundtrip(r1 in 1i64..=4, r2 in 1i64..=4, minus in any::<bool>(), m in prop::array::uniform4(-2i64..=2)) {
        let r = if minus { RVector::new(1, vec![r1, -1]) } else { RVector::new(2, vec![r1, r2]) };
        let Ok(r) = r else { return Ok(()) };
        let change = [[m[0], m[1]], [m[2], m[3]]];
        prop_assume!(m[0] * m[3] - m[1] * m[2] != 0);
        for s in closed_form(&r).unwrap().solutions {
            let mu = s.to_mu(&r, DEFAULT_MU_TOL).unwrap();
            prop_assert!(roundtrip_check(&mu, Some(change)));
        }
    }
}
