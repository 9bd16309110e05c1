use super::stats::{correlation, KS_COEFF_1PCT};
use super::{
    discretization_warning, expect_kind, fan_out, summarize, ExperimentConfig, ExperimentKind,
    ExperimentReport, StatRecord, Timer,
};
use crate::error::Result;
use crate::path::Threshold;
use crate::simulate::{EulerSteps, QvClock};
use crate::truncvar::TruncVarStream;

/// Fluctuations of one path at the horizon.
#[derive(Debug, Clone, Copy)]
struct Fluctuation {
    s_tv: f64,
    s_utv: f64,
    s_dtv: f64,
    x_end: f64,
    qv_end: f64,
}

fn fluctuation(config: &ExperimentConfig, c: f64, index: u64) -> Result<Fluctuation> {
    let steps = EulerSteps::new(config.spec, config.grid, config.seed.rng_for(index))?;
    let mut tv = TruncVarStream::new(Threshold::positive(c)?)?;
    let mut clock = QvClock::new(&config.spec);
    let (mut x_end, mut qv_end) = (0.0, 0.0);
    for (t, x) in steps {
        tv.push(t, x);
        qv_end = clock.advance(t, x);
        x_end = x;
    }
    let (u, d) = tv.current();
    Ok(Fluctuation {
        s_tv: u + d - qv_end / c,
        s_utv: u - 0.5 * (qv_end / c + x_end),
        s_dtv: d - 0.5 * (qv_end / c - x_end),
        x_end,
        qv_end,
    })
}

/// Central limit theorem for `TV^c - <X>/c` and its upward/downward parts.
///
/// Variance targets are `E<X>_T / 3` for TV and `E<X>_T / 12` for UTV and
/// DTV, with `<X>_T = T` for `clt` (Brownian motion) and the sample mean of
/// the clock for `clt_diffusion`. Tolerances: `var_tv` (0.035), `var_utv`
/// and `var_dtv` (0.009) as absolute bands for `clt`; `var_rel` (0.10) as a
/// relative band for `clt_diffusion`; `mean_se_multiple` (4);
/// `ks_coefficient` (1.63, i.e. KS distance <= 1.63/sqrt(N));
/// `corr_se_multiple` (3, i.e. |corr(S_TV, X_T)| <= 3/sqrt(N)); `identity`
/// (1e-9).
pub fn run_clt(config: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(config, &[ExperimentKind::Clt, ExperimentKind::CltDiffusion])?;
    let timer = Timer::start();
    let c = config.single_c();
    let mut report = ExperimentReport::new(config.clone());
    if let Some(w) = discretization_warning(&config.grid, c) {
        report.warnings.push(w);
    }
    let fl = fan_out(config.n_paths, |i| fluctuation(config, c, i))?;
    let n = fl.len() as f64;
    let col = |f: fn(&Fluctuation) -> f64| fl.iter().map(f).collect::<Vec<f64>>();

    let qv = summarize(&mut report, "qv_end", col(|f| f.qv_end))?;
    let clock = qv.mean;
    report.records.push(StatRecord::info(
        "mean_qv_end",
        clock,
        Some(qv.mean_se),
        "E<X>_T from the quadratic-variation clock",
    ));
    let x_end = col(|f| f.x_end);
    report.samples.insert("x_end".into(), x_end.clone());

    let k_mean = config.tolerance("mean_se_multiple", 4.0);
    let ks_max = config.tolerance("ks_coefficient", KS_COEFF_1PCT) / n.sqrt();
    let diffusion = config.kind == ExperimentKind::CltDiffusion;
    // (name, accessor, clock divisor for the variance target, absolute tolerance)
    type Part = (&'static str, fn(&Fluctuation) -> f64, f64, f64);
    let parts: [Part; 3] = [
        ("s_tv", |f| f.s_tv, 3.0, 0.035),
        ("s_utv", |f| f.s_utv, 12.0, 0.009),
        ("s_dtv", |f| f.s_dtv, 12.0, 0.009),
    ];
    for (name, get, denom, abs_tol) in parts {
        let s = summarize(&mut report, name, col(get))?;
        report.records.push(StatRecord::check(
            format!("mean_{name}"),
            s.mean,
            Some(s.mean_se),
            0.0,
            k_mean * s.mean_se,
            "centred Gaussian limit",
        ));
        let target = clock / denom;
        let (tol, provenance) = if diffusion {
            (
                config.tolerance("var_rel", 0.10) * target,
                format!("E<X>_T/{denom}, Ocone limit with clock <X>"),
            )
        } else {
            let key = format!("var_{}", &name[2..]);
            (
                config.tolerance(&key, abs_tol),
                format!("T/{denom}, Brownian limit scale"),
            )
        };
        report.records.push(StatRecord::check(
            format!("var_{name}"),
            s.variance,
            Some(s.variance_se),
            target,
            tol,
            provenance,
        ));
        report.records.push(StatRecord::check(
            format!("ks_{name}"),
            s.ks_distance,
            None,
            0.0,
            ks_max,
            "KS distance to the fitted Gaussian, 1% level",
        ));
    }

    let corr = correlation(&col(|f| f.s_tv), &x_end).unwrap_or(f64::NAN);
    report.records.push(StatRecord::check(
        "corr_s_tv_x_end",
        corr,
        Some(1.0 / n.sqrt()),
        0.0,
        config.tolerance("corr_se_multiple", 3.0) / n.sqrt(),
        "limit Brownian motion independent of X",
    ));
    let identity = fl
        .iter()
        .map(|f| (f.s_utv + f.s_dtv - f.s_tv).abs())
        .fold(0.0, f64::max);
    report.records.push(StatRecord::check(
        "max_identity_gap",
        identity,
        None,
        0.0,
        config.tolerance("identity", 1e-9),
        "S_TV = S_UTV + S_DTV (TV = UTV + DTV)",
    ));
    let remainder = fl
        .iter()
        .map(|f| (f.s_utv - f.s_dtv).abs())
        .fold(0.0, f64::max);
    report.records.push(StatRecord::check(
        "max_remainder",
        remainder,
        None,
        0.0,
        c,
        "X_T = UTV - DTV + R_c with |R_c| <= c",
    ));
    timer.finish(&mut report);
    Ok(report)
}
