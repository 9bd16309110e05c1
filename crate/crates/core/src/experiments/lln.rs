use super::{
    discretization_warning, expect_kind, fan_out, summarize, ExperimentConfig, ExperimentKind,
    ExperimentReport, StatRecord, Timer,
};
use crate::error::Result;
use crate::path::Threshold;
use crate::simulate::{EulerSteps, QvClock};
use crate::truncvar::TruncVarStream;

/// `sup_t |c TV^c_t - <X>_t|`, `sup_t |c UTV^c_t - <X>_t/2|` and the DTV
/// analogue along one simulated path.
fn sup_errors(config: &ExperimentConfig, c: f64, index: u64) -> Result<[f64; 3]> {
    let grid = config.grid_for(c)?;
    let steps = EulerSteps::new(config.spec, grid, config.seed.rng_for(index))?;
    let mut tv = TruncVarStream::new(Threshold::positive(c)?)?;
    let mut clock = QvClock::new(&config.spec);
    let mut err = [0.0f64; 3];
    for (t, x) in steps {
        tv.push(t, x);
        let qv = clock.advance(t, x);
        let (u, d) = tv.current();
        err[0] = err[0].max((c * (u + d) - qv).abs());
        err[1] = err[1].max((c * u - 0.5 * qv).abs());
        err[2] = err[2].max((c * d - 0.5 * qv).abs());
    }
    Ok(err)
}

/// Law of large numbers `c TV^c -> <X>` as `c -> 0`.
///
/// Records the mean sup-error for every `c`, the number of non-decreasing
/// steps along the list sorted by decreasing `c` (target 0), and the mean
/// TV sup-error at the smallest `c` against `sup_error_max` (default 0.08).
pub fn run_lln(config: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(config, &[ExperimentKind::Lln])?;
    let timer = Timer::start();
    let mut report = ExperimentReport::new(config.clone());
    let mut cs = config.c.clone();
    cs.sort_by(|a, b| b.total_cmp(a));

    let labels = ["tv", "utv", "dtv"];
    let mut means: [Vec<f64>; 3] = Default::default();
    for &c in &cs {
        let grid = config.grid_for(c)?;
        if let Some(w) = discretization_warning(&grid, c) {
            report.warnings.push(w);
        }
        let errs = fan_out(config.n_paths, |i| sup_errors(config, c, i))?;
        for (j, label) in labels.iter().enumerate() {
            let name = format!("sup_err_{label}[c={c}]");
            let xs: Vec<f64> = errs.iter().map(|e| e[j]).collect();
            let (m, se) = if xs.len() >= 2 {
                let s = summarize(&mut report, &name, xs)?;
                (s.mean, Some(s.mean_se))
            } else {
                (xs[0], None)
            };
            report.records.push(StatRecord::info(
                format!("mean_{name}"),
                m,
                se,
                "mean over paths of the sup-distance to the quadratic-variation clock",
            ));
            means[j].push(m);
        }
    }
    for (j, label) in labels.iter().enumerate() {
        let violations = means[j].windows(2).filter(|w| w[1] >= w[0]).count();
        report.records.push(StatRecord::check(
            format!("{label}_nondecreasing_steps"),
            violations as f64,
            None,
            0.0,
            0.0,
            "mean sup-error strictly decreasing as c decreases",
        ));
    }
    let smallest = *cs.last().expect("validated non-empty");
    let last = *means[0].last().expect("validated non-empty");
    report.records.push(StatRecord::check(
        format!("mean_sup_err_tv_at_smallest_c[c={smallest}]"),
        last,
        None,
        0.0,
        config.tolerance("sup_error_max", 0.08),
        "calibrated ceiling on the mean sup-error at the smallest c",
    ));
    timer.finish(&mut report);
    Ok(report)
}
