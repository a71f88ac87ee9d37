//! Verification suites: one record per acceptance criterion, serialized as a schema-versioned report.

mod checks;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::weights::{McParams, RNG_NAME};

pub const SCHEMA: &str = "cyclic-verify/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Weights,
    Miranda1,
    Miranda2,
    Star,
    Trace,
    Affine,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = ["algebra", "weights", "miranda1", "miranda2", "star", "trace", "affine", "all"];

    /// Acceptance criteria covered by the suite.
    pub fn criteria(self) -> Vec<u32> {
        match self {
            Suite::Algebra => vec![4],
            Suite::Weights => vec![1, 2, 3],
            Suite::Miranda1 => vec![5, 6],
            Suite::Miranda2 => vec![7],
            Suite::Star => vec![8],
            Suite::Trace => vec![9],
            Suite::Affine => vec![10],
            Suite::All => (1..=11).collect(),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "algebra" => Suite::Algebra,
            "weights" => Suite::Weights,
            "miranda1" => Suite::Miranda1,
            "miranda2" => Suite::Miranda2,
            "star" => Suite::Star,
            "trace" => Suite::Trace,
            "affine" => Suite::Affine,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [Suite::Algebra, Suite::Weights, Suite::Miranda1, Suite::Miranda2, Suite::Star, Suite::Trace, Suite::Affine, Suite::All]
            .iter()
            .position(|s| s == self)
            .expect("listed");
        f.write_str(Suite::NAMES[i])
    }
}

/// Settings shared by every check of a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol_mult: f64,
    /// Number of random instances for the exact checks that take a trial count.
    pub trials: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { suite: Suite::All, dim: 2, samples: 200_000, seed: 0, tol_mult: 1.0, trials: None }
    }
}

impl VerifyConfig {
    pub(crate) fn params(&self, samples: usize) -> McParams {
        McParams { samples, seed: self.seed, ..McParams::default() }
    }
}

/// One check. `pass` holds iff `exact_failures == 0` and `residual ≤ tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    pub criterion: u32,
    pub identity: String,
    pub anchor: String,
    pub inputs: serde_json::Value,
    pub cases: usize,
    pub exact_failures: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seeds: Vec<u64>,
    pub samples: usize,
    pub escalated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub rng: String,
    pub config: VerifyConfig,
    pub records: Vec<Record>,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs one criterion, escalating the sample budget ×10 once if a Monte Carlo check fails.
pub fn run_criterion(cfg: &VerifyConfig, criterion: u32) -> Record {
    let first = checks::run(cfg, criterion, cfg.samples);
    if first.pass || !first.monte_carlo {
        return first.into_record(cfg, cfg.samples, false);
    }
    let budget = cfg.samples.saturating_mul(10);
    checks::run(cfg, criterion, budget).into_record(cfg, budget, true)
}

/// Runs the criteria of `cfg.suite`; records are ordered by name.
pub fn run_suite(cfg: &VerifyConfig) -> Report {
    let mut records: Vec<Record> = Vec::new();
    for c in cfg.suite.criteria() {
        if c == 11 {
            records.push(checks::determinism(cfg, &records));
        } else {
            records.push(run_criterion(cfg, c));
        }
    }
    records.sort_by(|a, b| a.name.cmp(&b.name));
    let pass = records.iter().all(|r| r.pass);
    Report {
        schema: SCHEMA.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        rng: RNG_NAME.to_string(),
        config: cfg.clone(),
        records,
        pass,
    }
}
