//! Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic
//! throughout, wall-clock budget checked per criterion.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use lieorbit::brackets::{
    association_failures, classify_good, closed_form_good, kks, phi_m, predicted_bracket, quasiclassical_poisson_check,
    realize, root_coefficients, solve_compatible, solve_recursion, verify_compatible, verify_square,
    InvariantBivector, LinearForm, Sign,
};
use lieorbit::chevalley::{build_chevalley_basis, ChevalleyBasis};
use lieorbit::invariants::{in_span, invariant_basis, tensor_multiplicity, theta_split, InvariantComplex};
use lieorbit::levi::{build_levi, LeviDatum};
use lieorbit::multivec::{ad_action, phi, project_to_m, schouten};
use lieorbit::roots::{build_root_system, LieType};
use lieorbit::weyl::{de_rham_betti, DEFAULT_WEYL_BOUND};
use lieorbit::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn algebra(l: LieType, n: usize) -> ChevalleyBasis {
    build_chevalley_basis(Arc::new(build_root_system(l, n).unwrap()))
}

fn levi(b: &ChevalleyBasis, gamma: &[usize]) -> Arc<LeviDatum> {
    Arc::new(build_levi(b.root_system().clone(), gamma).unwrap())
}

/// Every `Γ ⊊ Π` as 0-based positions.
fn proper_subsets(rank: usize) -> Vec<Vec<usize>> {
    (0..(1u32 << rank) - 1)
        .map(|mask| (0..rank).filter(|i| mask & (1 << i) != 0).collect())
        .collect()
}

fn rand_scalar(rng: &mut ChaCha8Rng, complex: bool) -> Scalar {
    let mut x = Scalar::zero();
    while x.is_zero() {
        let re = Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let im = if complex && rng.gen_bool(0.5) {
            Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))
        } else {
            Scalar::zero()
        };
        x = re + im * Scalar::i();
    }
    x
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

const SMALL: [(LieType, usize); 10] = [
    (LieType::A, 1),
    (LieType::A, 2),
    (LieType::A, 3),
    (LieType::A, 4),
    (LieType::B, 2),
    (LieType::B, 3),
    (LieType::C, 3),
    (LieType::D, 4),
    (LieType::D, 5),
    (LieType::G, 2),
];

fn criterion_1() -> Check {
    let mut triples = 0;
    for (l, n) in SMALL {
        let b = algebra(l, n);
        let j = b.jacobi_violations();
        let c = b.cyclic_violations();
        let k = b.killing_violations();
        ensure(j + c + k == 0, || format!("{l:?}{n}: jacobi {j}, cyclic {c}, killing {k}"))?;
        let d = b.dim();
        triples += d * (d - 1) * (d - 2) / 6;
    }
    Ok(format!("10 algebras, {triples} basis triples, Killing normalization exact"))
}

fn criterion_2() -> Check {
    for (l, n) in [(LieType::A, 2), (LieType::B, 2), (LieType::D, 4)] {
        let b = algebra(l, n);
        let f = phi(&b);
        for x in 0..b.dim() {
            ensure(ad_action(&b, &b.basis_element(x), &f).is_zero(), || {
                format!("{l:?}{n}: ad(b_{x})φ ≠ 0")
            })?;
        }
    }
    Ok("ad(x)[[r,r]] = 0 for all basis x on A2, B2, D4".into())
}

fn random_bivector(rng: &mut ChaCha8Rng, lv: &Arc<LeviDatum>) -> InvariantBivector {
    let coeffs = (0..lv.num_positive()).map(|_| rand_scalar(rng, true)).collect();
    InvariantBivector::new(lv.clone(), coeffs).unwrap()
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases = [
        (LieType::A, 2, vec![]),
        (LieType::A, 2, vec![0]),
        (LieType::A, 3, vec![]),
        (LieType::A, 3, vec![1]),
        (LieType::B, 2, vec![]),
        (LieType::B, 2, vec![1]),
    ];
    let mut total = 0;
    for (l, n, g) in cases {
        let b = algebra(l, n);
        let lv = levi(&b, &g);
        for _ in 0..100 {
            let (c, d) = (random_bivector(&mut rng, &lv), random_bivector(&mut rng, &lv));
            let brute = schouten(&b, &realize(&b, &c).unwrap(), &realize(&b, &d).unwrap());
            let pred = predicted_bracket(&b, &root_coefficients(&b, &c), &root_coefficients(&b, &d));
            let ok = if g.is_empty() {
                brute == pred
            } else {
                project_to_m(&brute, &lv) == project_to_m(&pred, &lv)
            };
            ensure(ok, || format!("{l:?}{n} Γ={g:?}: oracle mismatch"))?;
            total += 1;
        }
    }
    Ok(format!("{total} random pairs, term-by-term equal"))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut solved = 0;
    let mut triples = 0;
    while solved < 50 {
        let n = if solved % 2 == 0 { 2 } else { 3 };
        let b = algebra(LieType::A, n);
        let lv = levi(&b, &[]);
        let seeds: Vec<Scalar> = (0..n).map(|_| rand_scalar(&mut rng, true)).collect();
        let k = if rng.gen_bool(0.2) { Scalar::zero() } else { rand_scalar(&mut rng, true) };
        let out = solve_recursion(lv.clone(), &seeds, &k).unwrap();
        let Some(sol) = out.solution() else { continue };
        let rep = verify_square(&b, &sol.bivector, &k).unwrap();
        ensure(rep.passed() && rep.consistent(), || format!("A{n} seeds {seeds:?} K={k}: square fails"))?;
        let assoc = association_failures(&sol.bivector, &k);
        ensure(assoc.is_empty(), || format!("A{n}: association orders disagree on {assoc:?}"))?;
        triples += lv.admissible_triples().len();
        solved += 1;
    }
    Ok(format!("50 random cases verified, {triples} association checks"))
}

fn criterion_5() -> Check {
    let mut orbits = 0;
    for (l, n) in [
        (LieType::A, 1),
        (LieType::A, 2),
        (LieType::A, 3),
        (LieType::A, 4),
        (LieType::B, 2),
        (LieType::B, 3),
        (LieType::D, 4),
    ] {
        let b = algebra(l, n);
        for g in proper_subsets(n) {
            let lv = levi(&b, &g);
            for s in 0..20 {
                let lam = LinearForm::random(&lv, s);
                let rep = verify_square(&b, &kks(lv.clone(), &lam), &Scalar::zero()).unwrap();
                ensure(rep.passed() && rep.consistent(), || format!("{l:?}{n} Γ={g:?} seed {s}"))?;
            }
            orbits += 1;
        }
    }
    Ok(format!("{orbits} orbits × 20 λ"))
}

fn classify_case(b: &ChevalleyBasis, g: &[usize], seed: u64) -> std::result::Result<bool, String> {
    let lv = levi(b, g);
    let c = classify_good(b, lv.clone(), seed).map_err(|e| e.to_string())?;
    let name = b.root_system().name();
    ensure(c.agree(), || format!("{name} Γ={g:?}: verdicts disagree {c:?}"))?;
    if !c.good() {
        let w = c.witness.as_ref().ok_or_else(|| format!("{name} Γ={g:?}: no witness"))?;
        let v: Vec<i32> = w.vector.iter().map(|&x| x as i32).collect();
        ensure(lv.index_of(&v).is_some(), || format!("{name} Γ={g:?}: witness {} not a quasiroot", w.label))?;
    }
    Ok(c.good())
}

fn criterion_6() -> Check {
    let (mut good, mut bad) = (0, 0);
    for (l, n) in SMALL.into_iter().filter(|(l, _)| *l != LieType::G) {
        let b = algebra(l, n);
        for (s, g) in proper_subsets(n).into_iter().enumerate() {
            if classify_case(&b, &g, s as u64)? {
                good += 1;
            } else {
                bad += 1;
            }
        }
    }
    let e6 = algebra(LieType::E, 6);
    ensure(classify_case(&e6, &[1, 2, 3, 4], 60)?, || "E6 Γ={2,3,4,5} not good".into())?;
    good += 1;
    for g in [vec![0, 2, 3, 4, 5], vec![0, 1, 2, 4, 5], vec![2, 3, 4, 5]] {
        ensure(!classify_case(&e6, &g, 61)?, || format!("E6 Γ={g:?} reported good"))?;
        bad += 1;
    }
    Ok(format!("{good} good, {bad} non-good; verdicts agree, witnesses are quasiroots"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases: Vec<(ChevalleyBasis, Arc<LeviDatum>)> = Vec::new();
    for n in [2, 3] {
        let b = algebra(LieType::A, n);
        let lv = levi(&b, &[]);
        cases.push((b, lv));
    }
    let d4 = algebra(LieType::D, 4);
    for g in proper_subsets(4) {
        let lv = levi(&d4, &g);
        if closed_form_good(&lv) {
            cases.push((d4.clone(), lv));
        }
    }
    let mut runs = 0;
    for (b, lv) in &cases {
        for (s, sign) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
            let lam = LinearForm::random(lv, 70 + s as u64 + runs);
            let seed = rand_scalar(&mut rng, false);
            for k in [rand_scalar(&mut rng, true), Scalar::i()] {
                let out = solve_compatible(b, lv.clone(), &lam, &k, sign, &seed).map_err(|e| e.to_string())?;
                let f = &out
                    .solution()
                    .ok_or_else(|| format!("{} Γ={:?}: unexpected witness", b.root_system().name(), lv.gamma()))?
                    .bivector;
                let rep = verify_compatible(b, f, &lam, &k).unwrap();
                ensure(rep.passed(), || format!("Γ={:?}: compatibility fails", lv.gamma()))?;
                if k == Scalar::i() {
                    let q = quasiclassical_poisson_check(b, f).unwrap();
                    ensure(q.passed(), || format!("Γ={:?}: quasiclassical check fails", lv.gamma()))?;
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{} orbits, {runs} solves verified, K=i Poisson checks exact", cases.len()))
}

fn criterion_8() -> Check {
    let mut orbits = 0;
    for (l, n) in SMALL.into_iter().filter(|(l, _)| *l != LieType::G) {
        let b = algebra(l, n);
        for g in proper_subsets(n) {
            let lv = levi(&b, &g);
            let d1 = invariant_basis(&b, &lv, 1).len();
            let d2 = invariant_basis(&b, &lv, 2).len();
            ensure(d1 == 0 && d2 == lv.num_positive(), || {
                format!("{l:?}{n} Γ={g:?}: dims {d1}, {d2} vs {}", lv.num_positive())
            })?;
            orbits += 1;
        }
    }
    let d4 = algebra(LieType::D, 4);
    let e6 = algebra(LieType::E, 6);
    let samples = [(&d4, vec![0, 1]), (&d4, vec![1, 2]), (&d4, vec![1, 3]), (&e6, vec![1, 2, 3, 4])];
    for (b, g) in samples {
        let lv = levi(b, &g);
        let tri = invariant_basis(b, &lv, 3);
        let (even, _) = theta_split(b, &tri);
        let name = b.root_system().name();
        ensure(even.len() == 1, || format!("{name} Γ={g:?}: θ-invariant dim {}", even.len()))?;
        ensure(in_span(&even, &phi_m(b, &lv)), || format!("{name} Γ={g:?}: φ_M not in span"))?;
        for (x, y) in lv.admissible_pairs() {
            let m = tensor_multiplicity(b, &lv, x, y).map_err(|e| e.to_string())?;
            ensure(m == 1, || format!("{name} Γ={g:?}: multiplicity {m}"))?;
        }
    }
    Ok(format!("{orbits} orbits swept; θ-even invariant trivectors = ⟨φ_M⟩ on D4 Γ1–Γ3 and E6"))
}

fn criterion_9() -> Check {
    let cases = [
        (LieType::A, 2, vec![]),
        (LieType::A, 3, vec![]),
        (LieType::A, 3, vec![1]),
        (LieType::B, 2, vec![]),
        (LieType::D, 4, vec![0, 1]),
    ];
    let mut out = Vec::new();
    for (l, n, g) in cases {
        let b = algebra(l, n);
        let lv = levi(&b, &g);
        let cx = InvariantComplex::build(&b, lv.clone());
        let lam = LinearForm::random(&lv, 9);
        let coh = cx.cohomology(&b, &kks(lv.clone(), &lam)).map_err(|e| e.to_string())?;
        let dr = de_rham_betti(&lv, DEFAULT_WEYL_BOUND).map_err(|e| e.to_string())?;
        let tag = format!("{l:?}{n} Γ={g:?}");
        ensure(coh.betti == dr, || format!("{tag}: {:?} vs de Rham {dr:?}", coh.betti))?;
        ensure(coh.betti.iter().skip(1).step_by(2).all(|&x| x == 0), || format!("{tag}: odd Betti"))?;
        ensure(coh.betti[2] == lv.complement().len(), || format!("{tag}: b2"))?;
        let euler: i64 = dr.iter().sum::<usize>() as i64;
        ensure(cx.euler_characteristic() == euler, || format!("{tag}: Euler characteristic"))?;
        if g.is_empty() && n == 2 && l == LieType::A {
            ensure(coh.betti == vec![1, 0, 2, 0, 2, 0, 1], || "A2 flag".into())?;
        }
        out.push(format!("{tag} {:?}", coh.betti));
    }
    Ok(out.join("; "))
}

type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "Chevalley integrity", Duration::from_secs(30), criterion_1),
        (2, "φ invariance", Duration::from_secs(10), criterion_2),
        (3, "bracket oracle equivalence", Duration::from_secs(60), criterion_3),
        (4, "recursion soundness", Duration::from_secs(30), criterion_4),
        (5, "KKS Jacobi", Duration::from_secs(60), criterion_5),
        (6, "good-orbit classification", Duration::from_secs(120), criterion_6),
        (7, "compatible pair end-to-end", Duration::from_secs(60), criterion_7),
        (8, "invariant dimensions", Duration::from_secs(120), criterion_8),
        (9, "cohomology vs de Rham", Duration::from_secs(60), criterion_9),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if took <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("over budget {budget:?}: {d}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {id} [{name}]: {status} ({:.2}s) — {detail}", took.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
