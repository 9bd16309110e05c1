use rand::Rng;

use super::{
    expect_kind, fan_out, ExperimentConfig, ExperimentKind, ExperimentReport, StatRecord, Timer,
};
use crate::error::Result;
use crate::oracle::brute_force_curves;
use crate::path::{SamplePath, Threshold};
use crate::truncvar::{truncvar_curve, tube_functions};

/// Random short path number `index` of the oracle corpus: every tenth path is
/// constant, three in ten take values on the lattice `k/4` (exact ties), the
/// rest are i.i.d. uniform on `[0, 1)`.
pub fn corpus_path(config: &ExperimentConfig, index: u64) -> SamplePath {
    let mut rng = config.seed.rng_for(index);
    let max_len = config.max_len.unwrap_or(40);
    let len = rng.random_range(1..=max_len);
    let values: Vec<f64> = match index % 10 {
        0 => vec![rng.random::<f64>(); len],
        1..=3 => (0..len)
            .map(|_| rng.random_range(0..=4u32) as f64 / 4.0)
            .collect(),
        _ => (0..len).map(|_| rng.random::<f64>()).collect(),
    };
    SamplePath::from_values(values).expect("finite values on integer times")
}

#[derive(Default)]
struct PathCheck {
    constant: bool,
    discrepancy: f64,
    identity_gap: f64,
    tube_tv_gap: f64,
    g0_excess: f64,
    g_excess: f64,
}

fn check_path(p: &SamplePath, cs: &[f64]) -> Result<PathCheck> {
    let mut out = PathCheck {
        constant: p.values().iter().all(|&v| v == p.first_value()),
        ..Default::default()
    };
    for &c in cs {
        let th = Threshold::positive(c)?;
        let fast = truncvar_curve(p, th)?;
        let slow = brute_force_curves(p, th);
        for k in 0..p.len() {
            let d = (fast.utv[k] - slow.utv[k])
                .abs()
                .max((fast.dtv[k] - slow.dtv[k]).abs())
                .max((fast.tv[k] - slow.tv[k]).abs());
            out.discrepancy = out.discrepancy.max(d);
            out.identity_gap = out
                .identity_gap
                .max((slow.tv[k] - slow.utv[k] - slow.dtv[k]).abs());
        }
        let tube = tube_functions(p, th)?;
        let tv = slow.tv[p.len() - 1];
        out.tube_tv_gap = out.tube_tv_gap.max((tube.g0_total_variation() - tv).abs());
        out.g0_excess = out.g0_excess.max(tube.g0_sup_distance(p) - c);
        out.g_excess = out.g_excess.max(tube.g_sup_distance(p) - c / 2.0);
    }
    Ok(out)
}

/// Streaming engine against the quadratic-time oracles on every prefix of a
/// random corpus.
///
/// Tolerances: `discrepancy` (1e-9), `identity` (1e-9), `tube_tv` (1e-9),
/// `tube_distance` (1e-12, the amount by which `||g0 - f||` may exceed `c` and
/// `||g - f||` may exceed `c/2`; the bounds are exact in real arithmetic and
/// the allowance only absorbs rounding in the sums defining `g0`).
pub fn run_oracle(config: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(config, &[ExperimentKind::Oracle])?;
    let timer = Timer::start();
    let checks = fan_out(config.n_paths, |i| {
        check_path(&corpus_path(config, i), &config.c)
    })?;
    let max = |f: fn(&PathCheck) -> f64| checks.iter().map(f).fold(0.0, f64::max);

    let mut report = ExperimentReport::new(config.clone());
    let tol = config.tolerance("discrepancy", 1e-9);
    report.records.push(StatRecord::check(
        "max_discrepancy",
        max(|c| c.discrepancy),
        None,
        0.0,
        tol,
        "quadratic-time DP of the partition definitions, every prefix",
    ));
    let constant = checks
        .iter()
        .filter(|c| c.constant)
        .map(|c| c.discrepancy)
        .fold(0.0, f64::max);
    report.records.push(StatRecord::check(
        "constant_path_discrepancy",
        constant,
        None,
        0.0,
        0.0,
        "constant paths have zero truncated variation",
    ));
    report.records.push(StatRecord::check(
        "max_identity_gap",
        max(|c| c.identity_gap),
        None,
        0.0,
        config.tolerance("identity", 1e-9),
        "TV = UTV + DTV on oracle values",
    ));
    report.records.push(StatRecord::check(
        "max_tube_tv_gap",
        max(|c| c.tube_tv_gap),
        None,
        0.0,
        config.tolerance("tube_tv", 1e-9),
        "total variation of g0 equals TV^c",
    ));
    let slack = config.tolerance("tube_distance", 1e-12);
    report.records.push(StatRecord::check(
        "g0_distance_excess",
        max(|c| c.g0_excess),
        None,
        0.0,
        slack,
        "||g0 - f|| <= c",
    ));
    report.records.push(StatRecord::check(
        "g_distance_excess",
        max(|c| c.g_excess),
        None,
        0.0,
        slack,
        "||g - f|| <= c/2",
    ));
    report.records.push(StatRecord::info(
        "paths",
        checks.len() as f64,
        None,
        "corpus size",
    ));
    timer.finish(&mut report);
    Ok(report)
}
