//! Monte Carlo validation harness.
//!
//! Each run simulates `n_paths` independent paths (path `i` reads stream `i`
//! of the configured seed), reduces every path to a few numbers, and compares
//! sample statistics against closed-form targets. Per-path results are
//! collected in index order before any aggregation, so a report does not
//! depend on the number of worker threads.
//!
//! Tolerances are looked up by name in [`ExperimentConfig::tolerances`];
//! missing names fall back to the defaults listed for each run.

mod clt;
mod large_time;
mod lln;
mod oracle_suite;
mod renewal;
pub mod report;
pub mod stats;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::simulate::{DiffusionSpec, GridSpec, RngSeed};

pub use clt::run_clt;
pub use large_time::run_large_time;
pub use lln::run_lln;
pub use oracle_suite::{corpus_path, run_oracle};
pub use renewal::{renewal_samples, run_renewal, RenewalSample};
pub use report::{ExperimentReport, StatRecord, Verdict};
pub use stats::{summary_stats, SummaryStats};

/// Seed used by the built-in default configs.
pub const DEFAULT_SEED: u64 = 20_130_517;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Lln,
    Clt,
    CltDiffusion,
    LargeTime,
    Renewal,
    Oracle,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Oracle,
        ExperimentKind::Lln,
        ExperimentKind::Clt,
        ExperimentKind::CltDiffusion,
        ExperimentKind::LargeTime,
        ExperimentKind::Renewal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Lln => "lln",
            ExperimentKind::Clt => "clt",
            ExperimentKind::CltDiffusion => "clt_diffusion",
            ExperimentKind::LargeTime => "large_time",
            ExperimentKind::Renewal => "renewal",
            ExperimentKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown experiment kind {s:?}")))
    }
}

/// Configuration document of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub spec: DiffusionSpec,
    /// A single threshold or a list; accepts either form on input.
    #[serde(deserialize_with = "one_or_many")]
    pub c: Vec<f64>,
    pub grid: GridSpec,
    pub n_paths: usize,
    pub seed: RngSeed,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// If set, each `c` is simulated with `dt = c^2 / dt_c2_divisor` instead
    /// of `grid.dt`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_c2_divisor: Option<f64>,
    /// Laplace arguments for the renewal run.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub betas: Vec<f64>,
    /// Longest random path in the oracle run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(f64),
        Many(Vec<f64>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(c) => vec![c],
        OneOrMany::Many(cs) => cs,
    })
}

/// The `dt <= c^2 / 50` step-size policy for small-`c` runs.
pub const DT_POLICY_DIVISOR: f64 = 50.0;

impl ExperimentConfig {
    /// The desk-scale configurations the acceptance suite runs.
    pub fn default_for(kind: ExperimentKind) -> Self {
        let bm = |mu| DiffusionSpec::BmDrift { mu };
        let grid = |horizon, dt| GridSpec { horizon, dt };
        let base = |spec, c: &[f64], grid, n_paths| ExperimentConfig {
            kind,
            spec,
            c: c.to_vec(),
            grid,
            n_paths,
            seed: RngSeed::new(DEFAULT_SEED),
            tolerances: BTreeMap::new(),
            dt_c2_divisor: None,
            betas: Vec::new(),
            max_len: None,
        };
        match kind {
            ExperimentKind::Oracle => ExperimentConfig {
                max_len: Some(40),
                ..base(bm(0.0), &[0.05, 0.1, 0.5, 1.0], grid(1.0, 1.0), 10_000)
            },
            ExperimentKind::Lln => ExperimentConfig {
                dt_c2_divisor: Some(DT_POLICY_DIVISOR),
                ..base(
                    bm(0.0),
                    &[0.2, 0.1, 0.05],
                    grid(1.0, 0.05 * 0.05 / 50.0),
                    100,
                )
            },
            ExperimentKind::Clt => base(bm(0.0), &[0.05], grid(1.0, 2e-6), 2000),
            ExperimentKind::CltDiffusion => base(
                DiffusionSpec::BoundedSine {
                    sigma0: 1.0,
                    eps: 0.25,
                    mu: 0.5,
                },
                &[0.05],
                grid(1.0, 2e-6),
                2000,
            ),
            ExperimentKind::LargeTime => base(bm(1.0), &[1.0], grid(400.0, 1e-3), 500),
            ExperimentKind::Renewal => ExperimentConfig {
                betas: vec![0.5, 1.0, 2.0],
                ..base(bm(1.0), &[1.0], grid(40.0, 1e-5), 200)
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::InvalidArgument("n_paths must be at least 1".into()));
        }
        if self.c.is_empty() {
            return Err(Error::InvalidArgument("c must not be empty".into()));
        }
        for &c in &self.c {
            crate::path::Threshold::positive(c)?;
        }
        self.spec.validate()?;
        self.grid.validate()?;
        self.seed.validate()?;
        for (name, &tol) in &self.tolerances {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "tolerance {name:?} must be finite and nonnegative, got {tol}"
                )));
            }
        }
        if let Some(d) = self.dt_c2_divisor {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "dt_c2_divisor must be positive, got {d}"
                )));
            }
        }
        let single_c = matches!(
            self.kind,
            ExperimentKind::Clt
                | ExperimentKind::CltDiffusion
                | ExperimentKind::LargeTime
                | ExperimentKind::Renewal
        );
        if single_c && self.c.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "{} takes exactly one c, got {}",
                self.kind,
                self.c.len()
            )));
        }
        let needs_bm = matches!(
            self.kind,
            ExperimentKind::Clt | ExperimentKind::LargeTime | ExperimentKind::Renewal
        );
        if needs_bm && !matches!(self.spec, DiffusionSpec::BmDrift { .. }) {
            return Err(Error::InvalidArgument(format!(
                "{} requires the bm_drift family, got {}",
                self.kind,
                self.spec.family_name()
            )));
        }
        if self.kind == ExperimentKind::Lln && self.c.len() < 2 {
            return Err(Error::InvalidArgument(
                "lln needs at least two values of c to test monotonicity".into(),
            ));
        }
        for &b in &self.betas {
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "betas must be finite and nonnegative, got {b}"
                )));
            }
        }
        if self.max_len == Some(0) {
            return Err(Error::InvalidArgument("max_len must be at least 1".into()));
        }
        Ok(())
    }

    /// Configured tolerance `name`, or `default`.
    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    /// Grid used for threshold `c`.
    pub fn grid_for(&self, c: f64) -> Result<GridSpec> {
        match self.dt_c2_divisor {
            Some(d) => GridSpec::new(self.grid.horizon, c * c / d),
            None => Ok(self.grid),
        }
    }

    fn single_c(&self) -> f64 {
        self.c[0]
    }

    fn mu(&self) -> f64 {
        match self.spec {
            DiffusionSpec::BmDrift { mu } => mu,
            _ => unreachable!("validated to be bm_drift"),
        }
    }
}

/// Validates `config` and runs the experiment its `kind` names.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    match config.kind {
        ExperimentKind::Oracle => run_oracle(config),
        ExperimentKind::Lln => run_lln(config),
        ExperimentKind::Clt | ExperimentKind::CltDiffusion => run_clt(config),
        ExperimentKind::LargeTime => run_large_time(config),
        ExperimentKind::Renewal => run_renewal(config),
    }
}

fn expect_kind(config: &ExperimentConfig, kinds: &[ExperimentKind]) -> Result<()> {
    if !kinds.contains(&config.kind) {
        return Err(Error::InvalidArgument(format!(
            "config kind {} cannot be run here",
            config.kind
        )));
    }
    config.validate()
}

/// Maps `f` over path indices `0..n` on the rayon pool, in index order.
fn fan_out<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    (0..n as u64).into_par_iter().map(f).collect()
}

fn discretization_warning(grid: &GridSpec, c: f64) -> Option<String> {
    let limit = c * c / DT_POLICY_DIVISOR;
    (grid.dt > limit).then(|| {
        format!(
            "discretization: dt = {} exceeds c^2/{DT_POLICY_DIVISOR} = {limit} for c = {c}; \
             crossings are truncated and TV^c is biased downward",
            grid.dt
        )
    })
}

struct Timer(Instant);

impl Timer {
    fn start() -> Self {
        Timer(Instant::now())
    }

    fn finish(self, report: &mut ExperimentReport) {
        report.wall_clock_seconds = self.0.elapsed().as_secs_f64();
    }
}

/// Stores the sample and its summary under `name`.
fn summarize(report: &mut ExperimentReport, name: &str, xs: Vec<f64>) -> Result<SummaryStats> {
    let s = summary_stats(&xs)?;
    report.summaries.insert(name.to_string(), s.clone());
    report.samples.insert(name.to_string(), xs);
    Ok(s)
}
