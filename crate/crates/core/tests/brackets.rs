use std::sync::Arc;

use lieorbit::brackets::{
    association_failures, classify_good, solve_compatible, solve_recursion, verify_compatible, verify_square,
    LinearForm, Sign,
};
use lieorbit::chevalley::{build_chevalley_basis, ChevalleyBasis};
use lieorbit::invariants::InvariantComplex;
use lieorbit::levi::{build_levi, LeviDatum};
use lieorbit::roots::{build_root_system, LieType};
use lieorbit::weyl::{de_rham_betti, DEFAULT_WEYL_BOUND};
use lieorbit::Scalar;

fn setup(label: LieType, rank: usize, gamma: &[usize]) -> (ChevalleyBasis, Arc<LeviDatum>) {
    let basis = build_chevalley_basis(Arc::new(build_root_system(label, rank).unwrap()));
    let levi = Arc::new(build_levi(basis.root_system().clone(), gamma).unwrap());
    (basis, levi)
}

#[test]
fn recursion_solutions_are_well_defined_on_good_orbits() {
    // The value at a quasiroot must not depend on how it is split into a sum.
    for (label, rank, gamma) in [
        (LieType::A, 4, vec![]),
        (LieType::D, 4, vec![0, 1]),
        (LieType::C, 3, vec![0, 1]),
        (LieType::E, 6, vec![1, 2, 3, 4]),
    ] {
        let (basis, levi) = setup(label, rank, &gamma);
        for draw in 0..3u64 {
            let seeds = LinearForm::random(&levi, draw).values().to_vec();
            let k = Scalar::ratio(draw as i64 + 1, 3);
            let Some(sol) = solve_recursion(levi.clone(), &seeds, &k).unwrap().solution().cloned() else {
                continue;
            };
            assert!(association_failures(&sol.bivector, &k).is_empty(), "{label:?}{rank} {gamma:?}");
            assert!(verify_square(&basis, &sol.bivector, &k).unwrap().passed());
        }
    }
}

#[test]
fn betti_of_random_recursion_brackets_match_de_rham() {
    for (label, rank, gamma) in [(LieType::A, 2, vec![]), (LieType::A, 3, vec![1]), (LieType::C, 3, vec![0, 1])] {
        let (basis, levi) = setup(label, rank, &gamma);
        let expected = de_rham_betti(&levi, DEFAULT_WEYL_BOUND).unwrap();
        let complex = InvariantComplex::build(&basis, levi.clone());
        let mut tried = 0;
        for draw in 10..20u64 {
            let seeds = LinearForm::random(&levi, draw).values().to_vec();
            let k = Scalar::i();
            let Some(sol) = solve_recursion(levi.clone(), &seeds, &k).unwrap().solution().cloned() else {
                continue;
            };
            assert!(verify_square(&basis, &sol.bivector, &k).unwrap().passed());
            let coh = complex.cohomology(&basis, &sol.bivector).unwrap();
            assert_eq!(coh.betti, expected, "{label:?}{rank} {gamma:?} draw {draw}");
            tried += 1;
            if tried == 2 {
                break;
            }
        }
        assert!(tried > 0);
    }
}

#[test]
fn compatible_sign_is_rigid() {
    let (basis, levi) = setup(LieType::A, 4, &[]);
    let lambda = LinearForm::random(&levi, 3);
    let k = Scalar::from(2);
    for sign in [Sign::Plus, Sign::Minus] {
        let out = solve_compatible(&basis, levi.clone(), &lambda, &k, sign, &Scalar::from(5)).unwrap();
        let f = &out.solution().expect("A-type orbits are solvable").bivector;
        let rep = verify_compatible(&basis, f, &lambda, &k).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.global_sign(), Some(sign));
        assert!(rep.pair_signs.iter().flatten().all(|&s| s == sign));
    }
}

#[test]
fn classification_verdicts_agree_on_exceptional_samples() {
    for (label, rank, gamma, good) in [
        (LieType::G, 2, vec![0], false),
        (LieType::F, 4, vec![0, 1, 2], false),
        (LieType::E, 6, vec![1, 2, 3, 4], true),
        (LieType::E, 7, vec![0, 1, 2, 3, 4, 5], true),
    ] {
        let (basis, levi) = setup(label, rank, &gamma);
        let c = classify_good(&basis, levi, 11).unwrap();
        assert!(c.agree(), "{label:?}{rank} {gamma:?}");
        assert_eq!(c.good(), good, "{label:?}{rank} {gamma:?}");
    }
}
