//! Versioned JSON report schema and its text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "lieorbit-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub command: String,
    pub input: InputEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
    pub result: Body,
}

/// The resolved job, with Γ in Bourbaki numbering and scalars as strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub algebra: String,
    pub gamma: Option<Vec<usize>>,
    pub all_gamma: bool,
    pub all_ranks: bool,
    pub mode: Option<String>,
    pub lambda: Option<Vec<String>>,
    pub seeds: Option<Vec<String>>,
    #[serde(rename = "K")]
    pub k: Option<String>,
    pub sign: String,
    pub seed_c: String,
    pub rng_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    Classify { orbits: Vec<OrbitVerdict> },
    Solve(Box<SolveReport>),
    Cohomology(Box<CohomologyReport>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitVerdict {
    pub algebra: String,
    pub gamma: Vec<usize>,
    pub complement: Vec<usize>,
    pub highest_root_coefficients: Vec<i32>,
    pub positive_quasiroots: usize,
    pub closed_form: bool,
    pub a_type: bool,
    pub solver: bool,
    pub good: bool,
    pub agree: bool,
    /// `A_k` chain of simple quasiroots (Bourbaki indices) when present.
    pub chain: Option<Vec<usize>>,
    pub witness: Option<WitnessOut>,
    pub lambda: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessOut {
    pub quasiroot: String,
    pub vector: Vec<i64>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub quasiroot: String,
    pub coords: Vec<i32>,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub mode: String,
    pub status: String,
    pub lambda: Option<Vec<String>>,
    pub coefficients: Vec<CoeffEntry>,
    pub witness: Option<WitnessOut>,
    pub verification: Option<Verification>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    #[serde(rename = "K")]
    pub k: String,
    pub square: SquareOut,
    pub association_failures: Option<Vec<String>>,
    pub compatibility: Option<CompatOut>,
    pub quasiclassical: Option<QuasiOut>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareOut {
    pub residual_zero: bool,
    pub residual_terms: usize,
    pub pair_failures: Vec<String>,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompatOut {
    pub cross_zero: bool,
    pub cross_pair_failures: Vec<String>,
    pub global_sign: Option<String>,
    pub triple_failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiOut {
    pub square_defect_zero: bool,
    pub invariant: bool,
    pub poisson_minus_zero: bool,
    pub poisson_plus_zero: bool,
    pub truncated_cross_terms: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohomologyRun {
    pub lambda: Option<Vec<String>>,
    pub seeds: Option<Vec<String>>,
    pub coefficients: Vec<CoeffEntry>,
    pub verification: Verification,
    pub differential_ranks: Vec<usize>,
    pub betti: Vec<usize>,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub mode: String,
    pub complex_dims: Vec<usize>,
    pub euler_characteristic: i64,
    pub de_rham: Vec<usize>,
    /// First run, plus one resample when a random draw missed the oracle.
    pub runs: Vec<CohomologyRun>,
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_verification(out: &mut String, v: &Verification) {
    let _ = writeln!(
        out,
        "verification (K = {}): square residual zero: {}, pairwise failures: {}, checks agree: {}",
        v.k,
        yes(v.square.residual_zero),
        v.square.pair_failures.len(),
        yes(v.square.consistent)
    );
    if let Some(a) = &v.association_failures {
        let _ = writeln!(out, "  association orders disagree on {} triples", a.len());
    }
    if let Some(c) = &v.compatibility {
        let _ = writeln!(
            out,
            "  [[f, v_λ]] zero: {}, global sign: {}, chain-identity failures: {}",
            yes(c.cross_zero),
            c.global_sign.as_deref().unwrap_or("n/a"),
            c.triple_failures.len()
        );
    }
    if let Some(q) = &v.quasiclassical {
        let _ = writeln!(
            out,
            "  quasiclassical: [[f,f]] = -φ_M: {}, invariant: {}, Poisson (f - r): {}, (f + r): {}",
            yes(q.square_defect_zero),
            yes(q.invariant),
            yes(q.poisson_minus_zero),
            yes(q.poisson_plus_zero)
        );
    }
    let _ = writeln!(out, "  passed: {}", yes(v.passed));
}

fn render_coeffs(out: &mut String, coeffs: &[CoeffEntry]) {
    let width = coeffs.iter().map(|c| c.quasiroot.len()).max().unwrap_or(0);
    for c in coeffs {
        let _ = writeln!(out, "  c({:<width$}) = {}", c.quasiroot, c.c);
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "lieorbit {} — {} {}", self.tool_version, self.command, self.input.algebra);
        match &self.result {
            Body::Classify { orbits } => {
                let _ = writeln!(
                    out,
                    "{:<8} {:<16} {:<6} {:<6} {:<6} {:<6} witness",
                    "algebra", "gamma", "good", "hr", "A_k", "solver"
                );
                for o in orbits {
                    let gamma = format!("{:?}", o.gamma);
                    let w = o.witness.as_ref().map_or(String::new(), |w| w.quasiroot.clone());
                    let _ = writeln!(
                        out,
                        "{:<8} {:<16} {:<6} {:<6} {:<6} {:<6} {}",
                        o.algebra,
                        gamma,
                        yes(o.good),
                        yes(o.closed_form),
                        yes(o.a_type),
                        yes(o.solver),
                        w
                    );
                }
            }
            Body::Solve(s) => {
                let _ = writeln!(out, "mode {}: {}", s.mode, s.status);
                render_coeffs(&mut out, &s.coefficients);
                if let Some(w) = &s.witness {
                    let _ = writeln!(out, "witness: {} ({})", w.quasiroot, w.reason);
                }
                if let Some(v) = &s.verification {
                    render_verification(&mut out, v);
                }
            }
            Body::Cohomology(c) => {
                let _ = writeln!(out, "mode {}", c.mode);
                let _ = writeln!(out, "complex dims: {:?} (Euler {})", c.complex_dims, c.euler_characteristic);
                let _ = writeln!(out, "de Rham:      {:?}", c.de_rham);
                for r in &c.runs {
                    let _ = writeln!(out, "betti:        {:?} match: {}", r.betti, yes(r.matches));
                }
            }
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "time: {t} ms");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips() {
        let r = Report {
            schema: SCHEMA.into(),
            tool_version: "0".into(),
            command: "cohomology".into(),
            input: InputEcho {
                algebra: "A1".into(),
                gamma: Some(vec![]),
                all_gamma: false,
                all_ranks: false,
                mode: Some("kks".into()),
                lambda: Some(vec!["1".into()]),
                seeds: None,
                k: None,
                sign: "+".into(),
                seed_c: "1".into(),
                rng_seed: 0,
            },
            timing_ms: None,
            result: Body::Cohomology(Box::new(CohomologyReport {
                mode: "kks".into(),
                complex_dims: vec![1, 0, 1],
                euler_characteristic: 2,
                de_rham: vec![1, 0, 1],
                runs: vec![],
            })),
        };
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!r.to_json().contains("timing_ms"));
        assert!(r.to_text().contains("Euler 2"));
    }
}
