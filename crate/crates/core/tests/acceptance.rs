//! Acceptance gate. Every test prints one `ACCEPTANCE` line per criterion
//! with the measured values, then asserts.
//!
//! Run with `cargo test -p truncvar-core --test acceptance -- --nocapture`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use truncvar_core::asymptotics::{
    laplace_d, m_mu_c, mean_renewal_time, mean_z, n_mu_c, rho2_mu_c, sigma2_mu_c, var_large_time_tv,
};
use truncvar_core::experiments::{
    corpus_path, run_clt, run_large_time, run_lln, run_oracle, run_renewal, ExperimentConfig,
    ExperimentKind, ExperimentReport,
};
use truncvar_core::{
    brute_force_curves, brute_force_tv, total_variation, truncvar_total, tube_functions,
    SamplePath, Threshold,
};

const CS: [f64; 4] = [0.05, 0.1, 0.5, 1.0];
const EXACT: f64 = 1e-9;

fn verdict(id: &str, name: &str, checks: &[(String, bool)]) {
    let ok = checks.iter().all(|(_, ok)| *ok);
    let detail: Vec<String> = checks
        .iter()
        .map(|(s, ok)| format!("{s} [{}]", if *ok { "ok" } else { "FAIL" }))
        .collect();
    println!(
        "ACCEPTANCE {id} {name}: {} | {}",
        if ok { "PASS" } else { "FAIL" },
        detail.join("; ")
    );
    assert!(ok, "{id} {name} failed: {detail:?}");
}

fn th(c: f64) -> Threshold {
    Threshold::positive(c).unwrap()
}

fn corpus() -> (ExperimentConfig, Vec<SamplePath>) {
    let cfg = ExperimentConfig::default_for(ExperimentKind::Oracle);
    let paths = (0..cfg.n_paths as u64)
        .map(|i| corpus_path(&cfg, i))
        .collect();
    (cfg, paths)
}

fn record(r: &ExperimentReport, name: &str) -> (f64, f64) {
    let rec = r
        .record(name)
        .unwrap_or_else(|| panic!("missing record {name}"));
    (rec.estimate, rec.std_error.unwrap_or(f64::NAN))
}

/// `|est - target| <= k * se`, formatted.
fn within_se(label: &str, est: f64, se: f64, target: f64, k: f64) -> (String, bool) {
    let z = (est - target) / se;
    (
        format!("{label} = {est:.6} (SE {se:.2e}) vs {target:.6}, z = {z:+.2}, need |z| <= {k}"),
        (est - target).abs() <= k * se,
    )
}

fn within_rel(label: &str, est: f64, target: f64, rel: f64) -> (String, bool) {
    (
        format!(
            "{label} = {est:.5} vs {target:.5} ({:+.1}%, need within {:.0}%)",
            100.0 * (est / target - 1.0),
            100.0 * rel
        ),
        (est - target).abs() <= rel * target,
    )
}

fn within_abs(label: &str, est: f64, target: f64, tol: f64) -> (String, bool) {
    (
        format!("{label} = {est:.5} vs {target:.5} +- {tol}"),
        (est - target).abs() <= tol,
    )
}

fn at_most(label: &str, est: f64, max: f64) -> (String, bool) {
    (format!("{label} = {est:.3e} <= {max:.3e}"), est <= max)
}

#[test]
fn c1_oracle_equivalence() {
    let start = Instant::now();
    let cfg = ExperimentConfig::default_for(ExperimentKind::Oracle);
    assert_eq!(cfg.n_paths, 10_000);
    assert_eq!(cfg.max_len, Some(40));
    assert_eq!(cfg.c, CS);
    let r = run_oracle(&cfg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "C1",
        "oracle-equivalence",
        &[
            at_most(
                "max |stream - DP| over all prefixes",
                record(&r, "max_discrepancy").0,
                EXACT,
            ),
            at_most(
                "constant paths",
                record(&r, "constant_path_discrepancy").0,
                0.0,
            ),
            at_most("runtime s", elapsed, 60.0),
        ],
    );
}

#[test]
fn c2_structural_identities() {
    let (_, paths) = corpus();
    let mut worst = [0.0f64; 8];
    let bump = |w: &mut f64, v: f64| *w = w.max(v);
    let dense: Vec<f64> = (1..=20).map(|k| 0.05 * k as f64).collect();
    for (i, p) in paths.iter().enumerate() {
        let n = p.len();
        // a second random path on the same grid
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let g_vals: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let g = SamplePath::new(p.times().to_vec(), g_vals).unwrap();
        let sum = p.add(&g).unwrap();
        let warped = p.time_change_with(|t| t * t * t + t + 1.0).unwrap();
        let neg = p.negate();

        for &c in &CS {
            let t = truncvar_total(p, th(c)).unwrap();
            let o = brute_force_curves(p, th(c));
            bump(&mut worst[0], (t.tv - t.utv - t.dtv).abs());
            bump(
                &mut worst[0],
                (o.tv[n - 1] - o.utv[n - 1] - o.dtv[n - 1]).abs(),
            );

            let tn = truncvar_total(&neg, th(c)).unwrap();
            bump(&mut worst[1], (t.dtv - tn.utv).abs());

            for k in 0..n {
                let left = truncvar_total(&p.slice(0, k + 1), th(c)).unwrap();
                let right = truncvar_total(&p.slice(k, n), th(c)).unwrap();
                for (whole, l, r) in [
                    (t.tv, left.tv, right.tv),
                    (t.utv, left.utv, right.utv),
                    (t.dtv, left.dtv, right.dtv),
                ] {
                    // super-additivity, then sub-additivity up to c
                    bump(&mut worst[2], l + r - whole);
                    bump(&mut worst[3], whole - l - r - c);
                }
            }

            for &c2 in &CS {
                let ts = truncvar_total(&sum, th(c + c2)).unwrap();
                let tg = truncvar_total(&g, th(c2)).unwrap();
                bump(&mut worst[4], ts.tv - t.tv - tg.tv);
                bump(&mut worst[4], ts.utv - t.utv - tg.utv);
                bump(&mut worst[4], ts.dtv - t.dtv - tg.dtv);
            }

            let tsum = truncvar_total(&sum, th(c)).unwrap();
            bump(&mut worst[5], (tsum.tv - t.tv).abs() - total_variation(&g));

            let tw = truncvar_total(&warped, th(c)).unwrap();
            bump(
                &mut worst[7],
                (tw.tv - t.tv)
                    .abs()
                    .max((tw.utv - t.utv).abs())
                    .max((tw.dtv - t.dtv).abs()),
            );
        }

        // nonincreasing and convex in c, on a dense grid
        let tvs: Vec<[f64; 3]> = dense
            .iter()
            .map(|&c| {
                let t = truncvar_total(p, th(c)).unwrap();
                [t.tv, t.utv, t.dtv]
            })
            .collect();
        for w in tvs.windows(3) {
            for ((a, b), d) in w[0].iter().zip(&w[1]).zip(&w[2]) {
                bump(&mut worst[6], b - a);
                // equally spaced: f(c2) <= (f(c1) + f(c3)) / 2
                bump(&mut worst[6], b - 0.5 * (a + d));
            }
        }
    }
    let names = [
        "TV = UTV + DTV",
        "DTV(f) = UTV(-f)",
        "V[a;s] + V[s;b] - V[a;b] (super-additivity violation)",
        "V[a;b] - V[a;s] - V[s;b] - c (sub-additivity violation)",
        "TV(f+g, c1+c2) - TV(f,c1) - TV(g,c2)",
        "|TV(f+g) - TV(f)| - TV^0(g)",
        "monotone/convex-in-c violation",
        "time-change difference",
    ];
    let checks: Vec<(String, bool)> = names
        .iter()
        .zip(worst)
        .map(|(n, w)| at_most(n, w.max(0.0), EXACT))
        .collect();
    verdict("C2", "structural-identities", &checks);
}

/// Minimum total variation over functions taking values on a `k + 1`-point
/// grid inside `[f_i - c/2, f_i + c/2]` at every sample, by a Viterbi pass.
fn grid_search_min_tv(v: &[f64], c: f64, k: usize) -> f64 {
    let level = |i: usize, j: usize| v[i] - 0.5 * c + c * j as f64 / k as f64;
    let mut cost = vec![0.0f64; k + 1];
    for i in 1..v.len() {
        let next: Vec<f64> = (0..=k)
            .map(|j| {
                let y = level(i, j);
                (0..=k)
                    .map(|l| cost[l] + (y - level(i - 1, l)).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        cost = next;
    }
    cost.into_iter().fold(f64::INFINITY, f64::min)
}

#[test]
fn c3_tube_optimality() {
    let (_, paths) = corpus();
    let (mut tv_gap, mut g0_excess, mut g_excess) = (0.0f64, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &paths {
        for &c in &CS {
            let tube = tube_functions(p, th(c)).unwrap();
            let tv = brute_force_tv(p, th(c));
            tv_gap = tv_gap.max((tube.g0_total_variation() - tv).abs());
            g0_excess = g0_excess.max(tube.g0_sup_distance(p) - c);
            g_excess = g_excess.max(tube.g_sup_distance(p) - c / 2.0);
        }
    }

    let mut short = ExperimentConfig::default_for(ExperimentKind::Oracle);
    short.max_len = Some(8);
    short.seed.seed += 1;
    let mut undercut = f64::NEG_INFINITY;
    let mut worst_gap = 0.0f64;
    for i in 0..2000 {
        let p = corpus_path(&short, i);
        for &c in &CS {
            let tv = truncvar_total(&p, th(c)).unwrap().tv;
            let best = grid_search_min_tv(p.values(), c, 200);
            undercut = undercut.max(tv - best);
            worst_gap = worst_gap.max(best - tv);
        }
    }
    // the bounds are exact in real arithmetic; 1e-12 only absorbs rounding
    verdict(
        "C3",
        "tube-optimality",
        &[
            at_most("|TV(g0) - TV^c|", tv_gap, EXACT),
            at_most("||g0 - f|| - c", g0_excess, 1e-12),
            at_most("||g - f|| - c/2", g_excess, 1e-12),
            at_most("TV^c - grid-search minimum (len <= 8)", undercut, 1e-6),
            (
                format!("grid-search minimum - TV^c <= {worst_gap:.2e} (info)"),
                true,
            ),
        ],
    );
}

#[test]
fn c4_lln() {
    let cfg = ExperimentConfig::default_for(ExperimentKind::Lln);
    assert_eq!(cfg.n_paths, 100);
    assert_eq!(cfg.c, [0.2, 0.1, 0.05]);
    assert_eq!(cfg.dt_c2_divisor, Some(50.0));
    let r = run_lln(&cfg).unwrap();
    let mut checks = Vec::new();
    for label in ["tv", "utv", "dtv"] {
        let means: Vec<f64> = cfg
            .c
            .iter()
            .map(|c| record(&r, &format!("mean_sup_err_{label}[c={c}]")).0)
            .collect();
        let decreasing = means.windows(2).all(|w| w[1] < w[0]);
        checks.push((
            format!(
                "{label} mean sup-error by c {:?} = {means:.4?} strictly decreasing",
                cfg.c
            ),
            decreasing,
        ));
    }
    let last = record(&r, "mean_sup_err_tv[c=0.05]");
    checks.push(at_most("TV mean sup-error at c = 0.05", last.0, 0.08));
    verdict("C4", "lln", &checks);
}

#[test]
fn c5_clt_brownian() {
    let cfg = ExperimentConfig::default_for(ExperimentKind::Clt);
    assert_eq!(
        (cfg.n_paths, cfg.c[0], cfg.grid.dt, cfg.grid.horizon),
        (2000, 0.05, 2e-6, 1.0)
    );
    let r = run_clt(&cfg).unwrap();
    let n = cfg.n_paths as f64;
    let s = |k: &str| r.summaries[k].clone();
    let mut checks = vec![
        within_abs("Var(S_TV)", s("s_tv").variance, 1.0 / 3.0, 0.035),
        within_abs("Var(S_UTV)", s("s_utv").variance, 1.0 / 12.0, 0.009),
    ];
    for k in ["s_tv", "s_utv", "s_dtv"] {
        checks.push(within_se(
            &format!("mean {k}"),
            s(k).mean,
            s(k).mean_se,
            0.0,
            4.0,
        ));
    }
    for k in ["s_tv", "s_utv", "s_dtv"] {
        checks.push(at_most(
            &format!("KS {k}"),
            s(k).ks_distance,
            1.63 / n.sqrt(),
        ));
    }
    checks.push(at_most(
        "max |S_UTV + S_DTV - S_TV|",
        record(&r, "max_identity_gap").0,
        EXACT,
    ));
    checks.push(at_most(
        "max |S_UTV - S_DTV|",
        record(&r, "max_remainder").0,
        0.05,
    ));
    verdict("C5", "clt-brownian", &checks);
}

#[test]
fn c6_clt_diffusion() {
    let cfg = ExperimentConfig::default_for(ExperimentKind::CltDiffusion);
    assert_eq!((cfg.n_paths, cfg.c[0], cfg.grid.dt), (2000, 0.05, 2e-6));
    let r = run_clt(&cfg).unwrap();
    let n = cfg.n_paths as f64;
    let clock = r.summaries["qv_end"].mean;
    let corr = record(&r, "corr_s_tv_x_end").0;
    verdict(
        "C6",
        "clt-diffusion",
        &[
            within_rel("Var(S_TV)", r.summaries["s_tv"].variance, clock / 3.0, 0.10),
            at_most("|corr(S_TV, X_1)|", corr.abs(), 3.0 / n.sqrt()),
            (format!("E<X>_1 = {clock:.5} (info)"), true),
        ],
    );
}

#[test]
fn c7_large_time() {
    let cfg = ExperimentConfig::default_for(ExperimentKind::LargeTime);
    assert_eq!(
        (cfg.n_paths, cfg.c[0], cfg.grid.horizon, cfg.grid.dt),
        (500, 1.0, 400.0, 1e-3)
    );
    let (mu, c) = (1.0, 1.0);
    let r = run_large_time(&cfg).unwrap();
    let m = m_mu_c(mu, c).unwrap();
    assert!((m - 1.313035).abs() < 1e-6);
    let mut checks = Vec::new();
    for (label, target) in [
        ("tv", m),
        ("utv", 0.5 * n_mu_c(mu, c).unwrap()),
        ("dtv", 0.5 * n_mu_c(-mu, c).unwrap()),
    ] {
        let (est, se) = record(&r, &format!("mean_{label}_per_time"));
        checks.push(within_se(&format!("mean {label}/n"), est, se, target, 3.0));
    }
    let var = |k: &str| r.summaries[k].variance;
    checks.push(within_rel(
        "Var TV fluctuation",
        var("tv_fluctuation"),
        0.54670,
        0.15,
    ));
    checks.push(within_rel(
        "Var UTV fluctuation",
        var("utv_fluctuation"),
        0.6811,
        0.15,
    ));
    checks.push(within_rel(
        "Var DTV fluctuation",
        var("dtv_fluctuation"),
        0.6811,
        0.15,
    ));
    checks.push((
        format!(
            "Var DTV fluctuation vs rho^2 at -mu = {:.5} (info)",
            rho2_mu_c(-mu, c).unwrap()
        ),
        true,
    ));
    verdict("C7", "large-time", &checks);
}

#[test]
fn c8_renewal() {
    let cfg = ExperimentConfig::default_for(ExperimentKind::Renewal);
    assert_eq!(cfg.betas, [0.5, 1.0, 2.0]);
    let (mu, c) = (1.0, 1.0);
    let r = run_renewal(&cfg).unwrap();
    let mut checks = vec![(
        format!("cycles = {}", record(&r, "cycles").0),
        record(&r, "cycle_shortfall").0 == 0.0,
    )];
    let (d, d_se) = record(&r, "mean_d");
    checks.push(within_se(
        "E D",
        d,
        d_se,
        mean_renewal_time(mu, c).unwrap(),
        3.0,
    ));
    let (g, g_se) = record(&r, "mean_g");
    checks.push(within_se(
        "E G",
        g,
        g_se,
        mean_z(1.0, 0.0, mu, c).unwrap(),
        3.0,
    ));
    for beta in [0.5, 1.0, 2.0] {
        let (l, l_se) = record(&r, &format!("mean_laplace_d[beta={beta}]"));
        checks.push(within_se(
            &format!("E exp(-{beta} D)"),
            l,
            l_se,
            laplace_d(beta, mu, c).unwrap(),
            3.0,
        ));
    }

    // var_large_time_tv / mean_renewal_time = sigma2_mu_c at 20 random points
    let mut state = 0x853c_49e6_748f_ea9bu64;
    let mut unif = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mu = 6.0 * unif() - 3.0;
        let c = 0.05 + 2.0 * unif();
        let lhs = var_large_time_tv(mu, c).unwrap() / mean_renewal_time(mu, c).unwrap();
        let rhs = sigma2_mu_c(mu, c).unwrap();
        worst = worst.max(((lhs - rhs) / rhs).abs());
    }
    checks.push(at_most("max relative |var/ED - sigma2|", worst, 1e-10));
    verdict("C8", "renewal", &checks);
}
