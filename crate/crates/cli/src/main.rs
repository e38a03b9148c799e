mod config;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::Parser;
use lieorbit::brackets::{
    association_failures, classify_good, kks, quasiclassical_poisson_check, solve_compatible, solve_recursion,
    verify_compatible, verify_square, InvariantBivector, LinearForm, SolverOutcome, Witness,
};
use lieorbit::chevalley::{build_chevalley_basis, ChevalleyBasis};
use lieorbit::invariants::InvariantComplex;
use lieorbit::levi::{build_levi, LeviDatum};
use lieorbit::roots::{build_root_system, LieType};
use lieorbit::weyl::{de_rham_betti, DEFAULT_WEYL_BOUND};
use lieorbit::{Error, Scalar};

use config::{Cli, Command, Format, Job, Mode};
use report::*;

const EXIT_CONFIG: u8 = 2;
const EXIT_WITNESS: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_CONFIG,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: message.into(),
    }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INTERNAL,
        message: message.into(),
    }
}

type Outcome = Result<(Body, u8), Failure>;

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string).collect()
}

fn bourbaki(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn witness_out(w: &Witness) -> WitnessOut {
    WitnessOut {
        quasiroot: w.label.clone(),
        vector: w.vector.clone(),
        reason: w.reason.clone(),
    }
}

fn coeff_table(b: &InvariantBivector) -> Vec<CoeffEntry> {
    let levi = b.levi();
    (0..levi.num_positive())
        .map(|q| CoeffEntry {
            quasiroot: levi.label(q),
            coords: levi.quasiroot(q).clone(),
            c: b.coeff(q).to_string(),
        })
        .collect()
}

fn pair_labels(levi: &LeviDatum, pairs: &[(usize, usize)]) -> Vec<String> {
    pairs.iter().map(|&(a, b)| format!("({}, {})", levi.label(a), levi.label(b))).collect()
}

fn triple_labels(levi: &LeviDatum, t: &[(usize, usize, usize)]) -> Vec<String> {
    t.iter()
        .map(|&(a, b, c)| format!("({}, {}, {})", levi.label(a), levi.label(b), levi.label(c)))
        .collect()
}

fn echo(job: &Job) -> InputEcho {
    InputEcho {
        algebra: format!("{}{}", job.label.as_char(), job.rank),
        gamma: job.gamma.as_deref().map(bourbaki),
        all_gamma: job.all_gamma,
        all_ranks: job.all_ranks,
        mode: job.mode.map(|m| format!("{m:?}").to_lowercase()),
        lambda: job.lambda.as_deref().map(strings),
        seeds: job.seeds.as_deref().map(strings),
        k: job.k.as_ref().map(Scalar::to_string),
        sign: job.sign.to_string(),
        seed_c: job.seed_c.to_string(),
        rng_seed: job.rng_seed,
    }
}

struct Orbit {
    basis: ChevalleyBasis,
    levi: Arc<LeviDatum>,
}

fn algebra(label: LieType, rank: usize) -> Result<ChevalleyBasis, Failure> {
    let rs = build_root_system(label, rank)?;
    Ok(build_chevalley_basis(Arc::new(rs)))
}

fn orbit(job: &Job) -> Result<Orbit, Failure> {
    let basis = algebra(job.label, job.rank)?;
    let gamma = job
        .gamma
        .as_ref()
        .ok_or_else(|| config_error("--gamma is required (use \"\" for the full flag)"))?;
    let levi = Arc::new(build_levi(basis.root_system().clone(), gamma)?);
    if levi.complement().is_empty() {
        return Err(config_error("Γ = Π gives a one-point orbit; choose a proper subset"));
    }
    Ok(Orbit { basis, levi })
}

fn classify(job: &Job) -> Outcome {
    let ranks: Vec<usize> = if job.all_ranks {
        (1..=job.rank).filter(|&r| job.label.valid_rank(r)).collect()
    } else {
        vec![job.rank]
    };
    let mut orbits = Vec::new();
    let mut code = 0;
    for rank in ranks {
        let basis = algebra(job.label, rank)?;
        let rs = basis.root_system().clone();
        let subsets: Vec<Vec<usize>> = if job.all_gamma {
            (0..(1u64 << rank) - 1)
                .map(|mask| (0..rank).filter(|i| mask & (1 << i) != 0).collect())
                .collect()
        } else {
            vec![job.gamma.clone().ok_or_else(|| config_error("--gamma or --all-gamma is required"))?]
        };
        for gamma in subsets {
            let levi = Arc::new(build_levi(rs.clone(), &gamma)?);
            let c = match &job.lambda {
                Some(values) if !job.all_gamma => {
                    let lambda = LinearForm::new(&levi, values.clone())?;
                    let mut c = classify_good(&basis, levi.clone(), job.rng_seed)?;
                    let out = lieorbit::brackets::compatible_by_search(
                        &basis,
                        levi.clone(),
                        &lambda,
                        &Scalar::one(),
                        &Scalar::one(),
                    )?;
                    c.solved = out.solution().is_some();
                    c.witness = out.witness().cloned();
                    c.lambda = lambda;
                    c
                }
                _ => classify_good(&basis, levi.clone(), job.rng_seed)?,
            };
            if !c.agree() {
                code = EXIT_INTERNAL;
            }
            orbits.push(OrbitVerdict {
                algebra: rs.name(),
                gamma: bourbaki(&gamma),
                complement: bourbaki(levi.complement()),
                highest_root_coefficients: rs.highest_root_coefficients(),
                positive_quasiroots: levi.num_positive(),
                closed_form: c.closed_form,
                a_type: c.a_type_chain.is_some(),
                solver: c.solved,
                good: c.good(),
                agree: c.agree(),
                chain: c
                    .a_type_chain
                    .as_ref()
                    .map(|ch| ch.iter().map(|&p| levi.complement()[p] + 1).collect()),
                witness: c.witness.as_ref().map(witness_out),
                lambda: strings(c.lambda.values()),
            });
        }
    }
    Ok((Body::Classify { orbits }, code))
}

/// A verified bracket from the job's mode.
struct Solved {
    bivector: Option<InvariantBivector>,
    lambda: Option<LinearForm>,
    seeds: Option<Vec<Scalar>>,
    witness: Option<Witness>,
    verification: Option<Verification>,
}

fn square_out(rep: &lieorbit::brackets::SquareReport, levi: &LeviDatum) -> SquareOut {
    SquareOut {
        residual_zero: rep.residual.is_zero(),
        residual_terms: rep.residual.len(),
        pair_failures: pair_labels(levi, &rep.pair_failures),
        consistent: rep.consistent(),
    }
}

fn quasi_out(o: &Orbit, f: &InvariantBivector, k: &Scalar) -> Result<Option<QuasiOut>, Failure> {
    if k * k != -Scalar::one() {
        return Ok(None);
    }
    let q = quasiclassical_poisson_check(&o.basis, f)?;
    Ok(Some(QuasiOut {
        square_defect_zero: q.square_defect.is_zero(),
        invariant: q.invariant,
        poisson_minus_zero: q.poisson[0].is_zero(),
        poisson_plus_zero: q.poisson[1].is_zero(),
        truncated_cross_terms: q.truncated_cross.len(),
    }))
}

fn solve_mode(job: &Job, o: &Orbit, mode: Mode, draw: u64) -> Result<Solved, Failure> {
    let levi = o.levi.clone();
    let lambda = || -> Result<LinearForm, Failure> {
        match &job.lambda {
            Some(v) if draw == job.rng_seed => Ok(LinearForm::new(&levi, v.clone())?),
            _ => Ok(LinearForm::random(&levi, draw)),
        }
    };
    match mode {
        Mode::Kks => {
            let lam = lambda()?;
            let v = kks(levi.clone(), &lam);
            let k = Scalar::zero();
            let sq = verify_square(&o.basis, &v, &k)?;
            let verification = Verification {
                k: k.to_string(),
                square: square_out(&sq, &levi),
                association_failures: None,
                compatibility: None,
                quasiclassical: None,
                passed: sq.passed(),
            };
            Ok(Solved {
                bivector: Some(v),
                lambda: Some(lam),
                seeds: None,
                witness: None,
                verification: Some(verification),
            })
        }
        Mode::Recursion => {
            let seeds = match &job.seeds {
                Some(s) if draw == job.rng_seed => s.clone(),
                // Random seeds share the λ sampler: nonzero small rationals.
                _ => LinearForm::random(&levi, draw).values().to_vec(),
            };
            let k = job.k.clone().unwrap_or_else(Scalar::one);
            match solve_recursion(levi.clone(), &seeds, &k)? {
                SolverOutcome::Inconsistent(w) => Ok(Solved {
                    bivector: None,
                    lambda: None,
                    seeds: Some(seeds),
                    witness: Some(w),
                    verification: None,
                }),
                SolverOutcome::Solved(sol) => {
                    let f = sol.bivector;
                    let sq = verify_square(&o.basis, &f, &k)?;
                    let assoc = association_failures(&f, &k);
                    let quasiclassical = quasi_out(o, &f, &k)?;
                    let passed = sq.passed() && assoc.is_empty() && quasiclassical.as_ref().is_none_or(quasi_passed);
                    Ok(Solved {
                        verification: Some(Verification {
                            k: k.to_string(),
                            square: square_out(&sq, &levi),
                            association_failures: Some(triple_labels(&levi, &assoc)),
                            compatibility: None,
                            quasiclassical,
                            passed,
                        }),
                        bivector: Some(f),
                        lambda: None,
                        seeds: Some(seeds),
                        witness: None,
                    })
                }
            }
        }
        Mode::Compatible => {
            let lam = lambda()?;
            let k = job.k.clone().unwrap_or_else(Scalar::one);
            match solve_compatible(&o.basis, levi.clone(), &lam, &k, job.sign, &job.seed_c)? {
                SolverOutcome::Inconsistent(w) => Ok(Solved {
                    bivector: None,
                    lambda: Some(lam),
                    seeds: None,
                    witness: Some(w),
                    verification: None,
                }),
                SolverOutcome::Solved(sol) => {
                    let f = sol.bivector;
                    let rep = verify_compatible(&o.basis, &f, &lam, &k)?;
                    let quasiclassical = quasi_out(o, &f, &k)?;
                    let passed = rep.passed() && quasiclassical.as_ref().is_none_or(quasi_passed);
                    Ok(Solved {
                        verification: Some(Verification {
                            k: k.to_string(),
                            square: square_out(&rep.square, &levi),
                            association_failures: None,
                            compatibility: Some(CompatOut {
                                cross_zero: rep.cross.is_zero(),
                                cross_pair_failures: pair_labels(&levi, &rep.cross_pair_failures),
                                global_sign: rep.global_sign().map(|s| s.to_string()),
                                triple_failures: triple_labels(&levi, &rep.triple_failures),
                            }),
                            quasiclassical,
                            passed,
                        }),
                        bivector: Some(f),
                        lambda: Some(lam),
                        seeds: None,
                        witness: None,
                    })
                }
            }
        }
    }
}

fn quasi_passed(q: &QuasiOut) -> bool {
    q.square_defect_zero && q.invariant && q.poisson_minus_zero && q.poisson_plus_zero
}

fn mode_name(m: Mode) -> String {
    format!("{m:?}").to_lowercase()
}

fn solve(job: &Job) -> Outcome {
    let o = orbit(job)?;
    let mode = job.mode.ok_or_else(|| config_error("--mode is required"))?;
    let s = solve_mode(job, &o, mode, job.rng_seed)?;
    let code = match (&s.witness, &s.verification) {
        (Some(_), _) => EXIT_WITNESS,
        (None, Some(v)) if !v.passed => EXIT_INTERNAL,
        _ => 0,
    };
    Ok((
        Body::Solve(Box::new(SolveReport {
            mode: mode_name(mode),
            status: if s.witness.is_some() { "inconsistent" } else { "solved" }.into(),
            lambda: s.lambda.as_ref().map(|l| strings(l.values())),
            coefficients: s.bivector.as_ref().map(coeff_table).unwrap_or_default(),
            witness: s.witness.as_ref().map(witness_out),
            verification: s.verification,
        })),
        code,
    ))
}

fn cohomology(job: &Job) -> Outcome {
    let o = orbit(job)?;
    let mode = job.mode.unwrap_or(Mode::Kks);
    let de_rham = de_rham_betti(&o.levi, DEFAULT_WEYL_BOUND)?;
    let complex = InvariantComplex::build(&o.basis, o.levi.clone());
    let user_data = match mode {
        Mode::Recursion => job.seeds.is_some(),
        _ => job.lambda.is_some(),
    };
    let mut runs = Vec::new();
    for draw in [job.rng_seed, job.rng_seed.wrapping_add(1)] {
        let s = solve_mode(job, &o, mode, draw)?;
        if let Some(w) = s.witness {
            return Err(Failure {
                code: EXIT_WITNESS,
                message: format!("no bracket to build the complex from: witness {} ({})", w.label, w.reason),
            });
        }
        let v = s.bivector.expect("solved");
        let verification = s.verification.expect("verified");
        if !verification.passed {
            return Err(internal("bracket failed verification"));
        }
        let coh = complex.cohomology(&o.basis, &v)?;
        let matches = coh.betti == de_rham;
        runs.push(CohomologyRun {
            lambda: s.lambda.as_ref().map(|l| strings(l.values())),
            seeds: s.seeds.as_deref().map(strings),
            coefficients: coeff_table(&v),
            verification,
            differential_ranks: coh.ranks,
            betti: coh.betti,
            matches,
        });
        if matches || user_data {
            break;
        }
    }
    Ok((
        Body::Cohomology(Box::new(CohomologyReport {
            mode: mode_name(mode),
            complex_dims: complex.dims(),
            euler_characteristic: complex.euler_characteristic(),
            de_rham,
            runs,
        })),
        0,
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match cli.command {
        Command::Classify(a) => ("classify", a),
        Command::Solve(a) => ("solve", a),
        Command::Cohomology(a) => ("cohomology", a),
    };
    let job = match Job::resolve(args) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let start = Instant::now();
    let outcome = match name {
        "classify" => classify(&job),
        "solve" => solve(&job),
        _ => cohomology(&job),
    };
    let (body, code) = match outcome {
        Ok(x) => x,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let report = Report {
        schema: SCHEMA.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        command: name.into(),
        input: echo(&job),
        timing_ms: job.timing.then(|| start.elapsed().as_millis()),
        result: body,
    };
    let text = match job.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    // A closed pipe (e.g. `| head`) is not an error worth a panic.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(code)
}
