//! Algebraic laws of the Schouten bracket and the wedge product, checked
//! exactly on random polyvectors.

use std::sync::{Arc, OnceLock};

use lieorbit::chevalley::{build_chevalley_basis, ChevalleyBasis, Element};
use lieorbit::multivec::{ad_action, schouten, Multivector};
use lieorbit::roots::{build_root_system, LieType};
use lieorbit::Scalar;
use proptest::prelude::*;

fn b2() -> &'static ChevalleyBasis {
    static BASIS: OnceLock<ChevalleyBasis> = OnceLock::new();
    BASIS.get_or_init(|| build_chevalley_basis(Arc::new(build_root_system(LieType::B, 2).unwrap())))
}

fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// A polyvector of the given degree on B2 (dim 10) with a few small terms.
fn polyvector(degree: usize) -> impl Strategy<Value = Multivector> {
    let term = (proptest::sample::subsequence((0..10).collect::<Vec<usize>>(), degree), -3i64..=3, 0i64..=1);
    proptest::collection::vec(term, 1..4).prop_map(move |terms| {
        let mut m = Multivector::zero(degree);
        for (blade, re, im) in terms {
            let c = &Scalar::from(re) + &(&Scalar::i() * &Scalar::from(im));
            m.add_term(blade, &c);
        }
        m
    })
}

fn graded(max: usize) -> impl Strategy<Value = Multivector> {
    (1..=max).prop_flat_map(polyvector)
}

fn element() -> impl Strategy<Value = Element> {
    proptest::collection::btree_map(0usize..10, (-3i64..=3).prop_map(Scalar::from), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn graded_antisymmetry(u in graded(3), v in graded(3)) {
        let (p, q) = (u.degree(), v.degree());
        let lhs = schouten(b2(), &u, &v);
        let rhs = schouten(b2(), &v, &u).scale(&-sign((p - 1) * (q - 1) % 2 == 1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_jacobi(u in graded(2), v in graded(2), w in graded(2)) {
        let (p, q, r) = (u.degree(), v.degree(), w.degree());
        let s = |a: usize, b: usize| sign((a - 1) * (b - 1) % 2 == 1);
        let t1 = schouten(b2(), &u, &schouten(b2(), &v, &w)).scale(&s(p, r));
        let t2 = schouten(b2(), &v, &schouten(b2(), &w, &u)).scale(&s(q, p));
        let t3 = schouten(b2(), &w, &schouten(b2(), &u, &v)).scale(&s(r, q));
        prop_assert!((&(&t1 + &t2) + &t3).is_zero());
    }

    #[test]
    fn leibniz_rule(u in graded(2), v in graded(2), w in graded(2)) {
        let (p, q) = (u.degree(), v.degree());
        let lhs = schouten(b2(), &u, &v.wedge(&w));
        let a = schouten(b2(), &u, &v).wedge(&w);
        let b = v.wedge(&schouten(b2(), &u, &w)).scale(&sign((p - 1) * q % 2 == 1));
        prop_assert_eq!(lhs, &a + &b);
    }

    #[test]
    fn wedge_is_bilinear_and_graded_commutative(u in graded(3), v in graded(3), w in graded(3), c in -4i64..=4) {
        prop_assume!(v.degree() == w.degree());
        let c = Scalar::from(c);
        let lhs = u.wedge(&(&v + &w.scale(&c)));
        let rhs = &u.wedge(&v) + &u.wedge(&w).scale(&c);
        prop_assert_eq!(lhs, rhs);
        let swapped = v.wedge(&u).scale(&sign(u.degree() * v.degree() % 2 == 1));
        prop_assert_eq!(u.wedge(&v), swapped);
    }

    #[test]
    fn ad_is_a_derivation_and_matches_schouten(x in element(), u in graded(2), v in graded(2)) {
        let lhs = ad_action(b2(), &x, &u.wedge(&v));
        let rhs = &ad_action(b2(), &x, &u).wedge(&v) + &u.wedge(&ad_action(b2(), &x, &v));
        prop_assert_eq!(lhs, rhs);
        let xv = Multivector::from_element(&x);
        prop_assert_eq!(ad_action(b2(), &x, &u), schouten(b2(), &xv, &u));
    }
}
