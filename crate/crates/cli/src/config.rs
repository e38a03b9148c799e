//! Job configuration: CLI flags layered over an optional flat TOML file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lieorbit::brackets::Sign;
use lieorbit::roots::LieType;
use lieorbit::Scalar;
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "lieorbit", version, about = "Invariant brackets on semisimple coadjoint orbits, computed exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether orbits are good, with three independent verdicts.
    Classify(JobArgs),
    /// Solve for an invariant bracket and verify it exactly.
    Solve(JobArgs),
    /// Betti numbers of the invariant polyvector complex against the de Rham oracle.
    Cohomology(JobArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Kks,
    Recursion,
    Compatible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Debug, Default)]
pub struct JobArgs {
    /// Cartan type letter (A–G).
    pub type_label: Option<String>,
    /// Rank of the algebra.
    pub rank: Option<usize>,
    /// Γ as comma-separated Bourbaki indices; "" for the full flag.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Sweep every proper Γ (classify only).
    #[arg(long)]
    pub all_gamma: bool,
    /// With --all-gamma, also sweep every smaller valid rank.
    #[arg(long)]
    pub all_ranks: bool,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// λ on the simple quasiroots, comma-separated scalars.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Recursion seeds c at the simple quasiroots, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub seeds: Option<String>,
    /// The constant K (e.g. 1, 1/2, i).
    #[arg(long = "K", allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Sign choice for the compatible system: + or -.
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<String>,
    /// c at the first simple quasiroot for the compatible system.
    #[arg(long = "seed", allow_hyphen_values = true)]
    pub seed_c: Option<String>,
    /// Seed of the pseudo-random stream used when λ is not given.
    #[arg(long)]
    pub rng_seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Include wall-clock timing (makes output nondeterministic).
    #[arg(long)]
    pub timing: bool,
    /// Flat TOML file with the same keys; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// A scalar written either as a TOML string or an integer.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl ScalarText {
    fn into_string(self) -> String {
        match self {
            ScalarText::Int(i) => i.to_string(),
            ScalarText::Text(s) => s,
        }
    }
}

/// A list given as an array or as a comma-separated string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ListText {
    Items(Vec<ScalarText>),
    Text(String),
}

impl ListText {
    fn into_string(self) -> String {
        match self {
            ListText::Text(s) => s,
            ListText::Items(v) => v.into_iter().map(ScalarText::into_string).collect::<Vec<_>>().join(","),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "type")]
    pub type_label: Option<String>,
    pub rank: Option<usize>,
    pub gamma: Option<ListText>,
    pub all_gamma: Option<bool>,
    pub all_ranks: Option<bool>,
    pub mode: Option<Mode>,
    pub lambda: Option<ListText>,
    pub seeds: Option<ListText>,
    #[serde(rename = "K")]
    pub k: Option<ScalarText>,
    pub sign: Option<String>,
    pub seed_c: Option<ScalarText>,
    pub rng_seed: Option<u64>,
    pub format: Option<Format>,
    pub timing: Option<bool>,
}

/// Fully parsed job.
#[derive(Clone, Debug, PartialEq)]
pub struct Job {
    pub label: LieType,
    pub rank: usize,
    /// 0-based positions.
    pub gamma: Option<Vec<usize>>,
    pub all_gamma: bool,
    pub all_ranks: bool,
    pub mode: Option<Mode>,
    pub lambda: Option<Vec<Scalar>>,
    pub seeds: Option<Vec<Scalar>>,
    pub k: Option<Scalar>,
    pub sign: Sign,
    pub seed_c: Scalar,
    pub rng_seed: u64,
    pub format: Format,
    pub timing: bool,
}

pub fn parse_scalars(s: &str) -> Result<Vec<Scalar>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<Scalar>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

pub fn parse_gamma(s: &str) -> Result<Vec<usize>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("bad simple-root index {t:?} (Bourbaki indices start at 1)")),
            Ok(i) => Ok(i - 1),
        })
        .collect()
}

pub fn parse_sign(s: &str) -> Result<Sign, String> {
    match s.trim() {
        "+" | "plus" | "+1" => Ok(Sign::Plus),
        "-" | "−" | "minus" | "-1" => Ok(Sign::Minus),
        other => Err(format!("sign must be + or -, got {other:?}")),
    }
}

impl Job {
    pub fn resolve(args: JobArgs) -> Result<Job, String> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                toml::from_str::<FileConfig>(&text).map_err(|e| format!("{}: {e}", path.display()))?
            }
            None => FileConfig::default(),
        };
        let type_text = args
            .type_label
            .or(file.type_label)
            .ok_or("missing algebra type (positional TYPE or `type` in config)")?;
        let label = {
            let mut chars = type_text.trim().chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => LieType::from_char(c.to_ascii_uppercase()),
                _ => None,
            }
            .ok_or_else(|| format!("unknown Cartan type {type_text:?}"))?
        };
        let rank = args.rank.or(file.rank).ok_or("missing rank (positional RANK or `rank` in config)")?;
        let gamma = args
            .gamma
            .or(file.gamma.map(ListText::into_string))
            .map(|g| parse_gamma(&g))
            .transpose()?;
        let list = |flag: Option<String>, f: Option<ListText>| -> Result<Option<Vec<Scalar>>, String> {
            flag.or(f.map(ListText::into_string)).map(|s| parse_scalars(&s)).transpose()
        };
        let scalar = |flag: Option<String>, f: Option<ScalarText>| -> Result<Option<Scalar>, String> {
            flag.or(f.map(ScalarText::into_string))
                .map(|s| s.trim().parse::<Scalar>().map_err(|e| format!("{s:?}: {e}")))
                .transpose()
        };
        Ok(Job {
            label,
            rank,
            gamma,
            all_gamma: args.all_gamma || file.all_gamma.unwrap_or(false),
            all_ranks: args.all_ranks || file.all_ranks.unwrap_or(false),
            mode: args.mode.or(file.mode),
            lambda: list(args.lambda, file.lambda)?,
            seeds: list(args.seeds, file.seeds)?,
            k: scalar(args.k, file.k)?,
            sign: args.sign.or(file.sign).map(|s| parse_sign(&s)).transpose()?.unwrap_or(Sign::Plus),
            seed_c: scalar(args.seed_c, file.seed_c)?.unwrap_or_else(Scalar::one),
            rng_seed: args.rng_seed.or(file.rng_seed).unwrap_or(0),
            format: args.format.or(file.format).unwrap_or_default(),
            timing: args.timing || file.timing.unwrap_or(false),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_is_bourbaki_one_based() {
        assert_eq!(parse_gamma(""), Ok(vec![]));
        assert_eq!(parse_gamma("1, 3"), Ok(vec![0, 2]));
        assert!(parse_gamma("0").is_err());
        assert!(parse_gamma("x").is_err());
    }

    #[test]
    fn scalars_and_signs() {
        let v = parse_scalars("1/2, -i, 3+2i").unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v[0], Scalar::ratio(1, 2));
        assert_eq!(parse_sign("-"), Ok(Sign::Minus));
        assert!(parse_sign("0").is_err());
    }

    #[test]
    fn toml_lists_accept_arrays_and_strings() {
        let f: FileConfig = toml::from_str("type = \"B\"\nrank = 3\ngamma = [1, 2]\nlambda = \"1/2,3\"\nK = 2").unwrap();
        let job = Job::resolve(JobArgs {
            config: None,
            ..Default::default()
        });
        assert!(job.is_err(), "type and rank are required");
        assert_eq!(f.gamma.unwrap().into_string(), "1,2");
        assert_eq!(f.lambda.unwrap().into_string(), "1/2,3");
        assert_eq!(f.k.unwrap().into_string(), "2");
    }
}
