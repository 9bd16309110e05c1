use super::{
    expect_kind, fan_out, summarize, ExperimentConfig, ExperimentKind, ExperimentReport,
    StatRecord, Timer,
};
use crate::asymptotics::{m_mu_c, n_mu_c, rho2_mu_c, sigma2_mu_c};
use crate::error::Result;
use crate::path::Threshold;
use crate::simulate::EulerSteps;
use crate::truncvar::{TruncVarStream, TruncVarTotals};

fn totals(config: &ExperimentConfig, c: f64, index: u64) -> Result<(TruncVarTotals, f64)> {
    let steps = EulerSteps::new(config.spec, config.grid, config.seed.rng_for(index))?;
    let mut s = TruncVarStream::new(Threshold::positive(c)?)?;
    let mut end = 0.0;
    for (t, x) in steps {
        s.push(t, x);
        end = t;
    }
    Ok((s.totals(), end))
}

/// Large-time behaviour of `TV^c`, `UTV^c`, `DTV^c` for Brownian motion with
/// drift over `[0, n]`, `n = grid.horizon`.
///
/// Rates are checked within `mean_se_multiple` (3) standard errors of
/// `m_mu^c`, `n_mu^c / 2`, `n_{-mu}^c / 2`; variances of
/// `(V - rate n) / sqrt(n)` within `var_rel` (15%) of `sigma_mu^2`,
/// `rho_mu^2` (UTV) and `rho_{-mu}^2` (DTV, by `DTV(X) = UTV(-X)` and
/// `-X` having drift `-mu`).
pub fn run_large_time(config: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(config, &[ExperimentKind::LargeTime])?;
    let timer = Timer::start();
    let (mu, c) = (config.mu(), config.single_c());
    let mut report = ExperimentReport::new(config.clone());
    let runs = fan_out(config.n_paths, |i| totals(config, c, i))?;
    let horizon = runs[0].1;

    let rates = [
        ("tv", m_mu_c(mu, c)?, "m_mu^c = mu coth(c mu)"),
        ("utv", 0.5 * n_mu_c(mu, c)?, "n_mu^c / 2"),
        ("dtv", 0.5 * n_mu_c(-mu, c)?, "n_{-mu}^c / 2"),
    ];
    let variances = [sigma2_mu_c(mu, c)?, rho2_mu_c(mu, c)?, rho2_mu_c(-mu, c)?];
    let var_provenance = [
        "sigma_mu^c squared",
        "rho_mu^c squared",
        "rho_{-mu}^c squared",
    ];
    let k_mean = config.tolerance("mean_se_multiple", 3.0);
    let var_rel = config.tolerance("var_rel", 0.15);
    for (j, (label, rate, provenance)) in rates.into_iter().enumerate() {
        let pick = |t: &TruncVarTotals| [t.tv, t.utv, t.dtv][j];
        let per_time: Vec<f64> = runs.iter().map(|(t, _)| pick(t) / horizon).collect();
        let fluct: Vec<f64> = runs
            .iter()
            .map(|(t, _)| (pick(t) - rate * horizon) / horizon.sqrt())
            .collect();
        let rate_name = format!("{label}_per_time");
        let fluct_name = format!("{label}_fluctuation");
        if per_time.len() < 2 {
            report.records.push(StatRecord::info(
                format!("mean_{rate_name}"),
                per_time[0],
                None,
                provenance,
            ));
            continue;
        }
        let s = summarize(&mut report, &rate_name, per_time)?;
        report.records.push(StatRecord::check(
            format!("mean_{rate_name}"),
            s.mean,
            Some(s.mean_se),
            rate,
            k_mean * s.mean_se,
            provenance,
        ));
        let f = summarize(&mut report, &fluct_name, fluct)?;
        report.records.push(StatRecord::check(
            format!("var_{fluct_name}"),
            f.variance,
            Some(f.variance_se),
            variances[j],
            var_rel * variances[j],
            var_provenance[j],
        ));
    }
    timer.finish(&mut report);
    Ok(report)
}
