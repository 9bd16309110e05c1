use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::stats::SummaryStats;
use super::ExperimentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Diagnostic only; no target.
    Info,
}

/// One checked (or informational) statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatRecord {
    pub name: String,
    pub estimate: f64,
    pub std_error: Option<f64>,
    pub target: Option<f64>,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
    /// Where the target comes from (formula name or rule).
    pub provenance: String,
}

impl StatRecord {
    /// Pass iff `|estimate - target| <= tolerance`.
    pub fn check(
        name: impl Into<String>,
        estimate: f64,
        std_error: Option<f64>,
        target: f64,
        tolerance: f64,
        provenance: impl Into<String>,
    ) -> Self {
        let verdict = if (estimate - target).abs() <= tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            name: name.into(),
            estimate,
            std_error,
            target: Some(target),
            tolerance: Some(tolerance),
            verdict,
            provenance: provenance.into(),
        }
    }

    pub fn info(
        name: impl Into<String>,
        estimate: f64,
        std_error: Option<f64>,
        provenance: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            estimate,
            std_error,
            target: None,
            tolerance: None,
            verdict: Verdict::Info,
            provenance: provenance.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// Outcome of one experiment run. Everything except `wall_clock_seconds` is a
/// deterministic function of the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub algorithm_id: String,
    pub records: Vec<StatRecord>,
    pub summaries: BTreeMap<String, SummaryStats>,
    pub warnings: Vec<String>,
    pub wall_clock_seconds: f64,
    /// Per-sample values behind the summaries, for [`write_samples_csv`](Self::write_samples_csv).
    #[serde(skip)]
    pub samples: BTreeMap<String, Vec<f64>>,
}

impl ExperimentReport {
    pub(crate) fn new(config: ExperimentConfig) -> Self {
        Self {
            algorithm_id: config.seed.algorithm_id.clone(),
            config,
            records: Vec::new(),
            summaries: BTreeMap::new(),
            warnings: Vec::new(),
            wall_clock_seconds: 0.0,
            samples: BTreeMap::new(),
        }
    }

    /// True iff no record failed.
    pub fn passed(&self) -> bool {
        self.records.iter().all(StatRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StatRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn record(&self, name: &str) -> Option<&StatRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Long-format CSV `statistic,index,value` of every stored sample.
    pub fn write_samples_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "statistic,index,value")?;
        for (name, xs) in &self.samples {
            for (i, x) in xs.iter().enumerate() {
                // `{}` on f64 is the shortest representation that round-trips
                writeln!(w, "{name},{i},{x}")?;
            }
        }
        Ok(())
    }
}
