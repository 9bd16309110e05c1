use serde::{Deserialize, Serialize};

use super::{
    expect_kind, fan_out, summarize, ExperimentConfig, ExperimentKind, ExperimentReport,
    StatRecord, Timer,
};
use crate::asymptotics::{
    centered_second_moment, drift_ratio, laplace_d, mean_renewal_time, mean_z,
};
use crate::error::Result;
use crate::path::{SamplePath, Threshold};
use crate::simulate::EulerSteps;
use crate::truncvar::TruncVarStream;

/// One renewal cycle `[T_U,i ; T_U,i+1)` between consecutive upward crossings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenewalSample {
    /// Duration `D`.
    pub d: f64,
    /// Increment of `TV^c` over the cycle, `G`.
    pub g: f64,
    /// Increment of the path over the cycle, `H`.
    pub h: f64,
}

/// Collects cycles from a stream of samples. The stretch before the first
/// upward crossing is not a cycle (its law differs), so it is never emitted.
struct CycleTracker {
    stream: TruncVarStream,
    ups: usize,
    last: Option<(f64, f64, f64)>,
    cycles: Vec<RenewalSample>,
}

impl CycleTracker {
    fn new(c: f64) -> Result<Self> {
        Ok(Self {
            stream: TruncVarStream::new(Threshold::positive(c)?)?,
            ups: 0,
            last: None,
            cycles: Vec::new(),
        })
    }

    #[inline]
    fn push(&mut self, t: f64, x: f64) {
        self.stream.push(t, x);
        let ups = self.stream.crossing_counts().0;
        if ups == self.ups {
            return;
        }
        self.ups = ups;
        let (u, d) = self.stream.current();
        let now = (t, x, u + d);
        if let Some((t0, x0, tv0)) = self.last {
            self.cycles.push(RenewalSample {
                d: t - t0,
                g: now.2 - tv0,
                h: x - x0,
            });
        }
        self.last = Some(now);
    }
}

/// Complete renewal cycles of a path, first cycle discarded.
pub fn renewal_samples(p: &SamplePath, c: Threshold) -> Result<Vec<RenewalSample>> {
    let mut tracker = CycleTracker::new(c.get())?;
    for (&t, &x) in p.times().iter().zip(p.values()) {
        tracker.push(t, x);
    }
    Ok(tracker.cycles)
}

fn path_cycles(config: &ExperimentConfig, c: f64, index: u64) -> Result<Vec<RenewalSample>> {
    let steps = EulerSteps::new(config.spec, config.grid, config.seed.rng_for(index))?;
    let mut tracker = CycleTracker::new(c)?;
    for (t, x) in steps {
        tracker.push(t, x);
    }
    Ok(tracker.cycles)
}

/// Renewal moments of Brownian motion with drift: sample means of `D`, `G`,
/// `H`, `exp(-beta D)` and of the squared centred cycle variable
/// `(G - r D)^2`, `r = E G / E D`, each within `mean_se_multiple` (3)
/// standard errors of its closed form. Fewer than `min_cycles` (100) cycles
/// fail the run.
pub fn run_renewal(config: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(config, &[ExperimentKind::Renewal])?;
    let timer = Timer::start();
    let (mu, c) = (config.mu(), config.single_c());
    let mut report = ExperimentReport::new(config.clone());
    let cycles: Vec<RenewalSample> = fan_out(config.n_paths, |i| path_cycles(config, c, i))?
        .into_iter()
        .flatten()
        .collect();

    let min_cycles = config.tolerance("min_cycles", 100.0);
    let shortfall = (min_cycles - cycles.len() as f64).max(0.0);
    report.records.push(StatRecord::check(
        "cycle_shortfall",
        shortfall,
        None,
        0.0,
        0.0,
        "at least min_cycles complete cycles",
    ));
    if shortfall > 0.0 {
        report.warnings.push(format!(
            "only {} complete cycles; need {min_cycles}",
            cycles.len()
        ));
    }
    if cycles.len() < 2 {
        timer.finish(&mut report);
        return Ok(report);
    }

    let k = config.tolerance("mean_se_multiple", 3.0);
    let r = drift_ratio(1.0, 0.0, mu, c)?;
    let mut checks: Vec<(String, Vec<f64>, f64, String)> = vec![
        (
            "d".into(),
            cycles.iter().map(|s| s.d).collect(),
            mean_renewal_time(mu, c)?,
            "E D = 2 sinh(c mu)^2 / mu^2".into(),
        ),
        (
            "g".into(),
            cycles.iter().map(|s| s.g).collect(),
            mean_z(1.0, 0.0, mu, c)?,
            "E Z at (a, b) = (1, 0)".into(),
        ),
        (
            "h".into(),
            cycles.iter().map(|s| s.h).collect(),
            mean_z(0.0, 1.0, mu, c)?,
            "E Z at (a, b) = (0, 1)".into(),
        ),
        (
            "x_squared".into(),
            cycles.iter().map(|s| (s.g - r * s.d).powi(2)).collect(),
            centered_second_moment(1.0, 0.0, mu, c)?,
            "E X^2 for X = G - (E G / E D) D".into(),
        ),
    ];
    for &beta in &config.betas {
        checks.push((
            format!("laplace_d[beta={beta}]"),
            cycles.iter().map(|s| (-beta * s.d).exp()).collect(),
            laplace_d(beta, mu, c)?,
            format!("Laplace transform of D at beta = {beta}"),
        ));
    }
    for (name, xs, target, provenance) in checks {
        let s = summarize(&mut report, &name, xs)?;
        report.records.push(StatRecord::check(
            format!("mean_{name}"),
            s.mean,
            Some(s.mean_se),
            target,
            k * s.mean_se,
            provenance,
        ));
    }
    report.records.push(StatRecord::info(
        "cycles",
        cycles.len() as f64,
        None,
        "complete cycles after discarding the first",
    ));
    timer.finish(&mut report);
    Ok(report)
}
