use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use truncvar_core::asymptotics::{
    m_mu_c, mean_renewal_time, mean_z, n_mu_c, rho2_mu_c, sigma2_mu_c,
};
use truncvar_core::experiments::{run_experiment, ExperimentConfig, ExperimentKind, Verdict};
use truncvar_core::simulate::{sample_path, DiffusionSpec, GridSpec, RngSeed};
use truncvar_core::{
    total_variation, truncvar_curve, tube_functions, SamplePath, Threshold, TruncVarTotals,
};

use crate::error::{CliError, Result};
use crate::series::{read_series, write_columns, write_series};

/// Truncated variation of sampled paths.
#[derive(Debug, Parser)]
#[command(name = "truncvar", version, about)]
pub struct Cli {
    /// Directory for generated files when no explicit output is given.
    #[arg(
        long,
        global = true,
        env = "TRUNCVAR_OUT_DIR",
        default_value = "truncvar-out"
    )]
    pub out_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// UTV^c, DTV^c and TV^c of a `time,value` CSV series.
    #[command(allow_negative_numbers = true)]
    Compute {
        /// Input CSV, or `-` for standard input.
        input: PathBuf,
        /// Truncation threshold, c > 0.
        #[arg(short, long)]
        c: Option<f64>,
        /// Plain (untruncated) total variation instead of TV^c.
        #[arg(long, conflicts_with_all = ["c", "emit_process", "emit_tube"])]
        total_variation: bool,
        /// Also write the cumulative curves to `<out-dir>/<stem>.process.csv`.
        #[arg(long)]
        emit_process: bool,
        /// Also write the tube functions to `<out-dir>/<stem>.tube.csv`.
        #[arg(long)]
        emit_tube: bool,
        /// Where to write the JSON result; standard output by default.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simulate a path and write it as a `time,value` CSV series.
    #[command(allow_negative_numbers = true)]
    Simulate {
        #[arg(long, value_enum)]
        family: Family,
        /// Drift (bm_drift, bounded_sine).
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        /// Mean-reversion rate (ou).
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        /// Long-run mean (ou).
        #[arg(long, default_value_t = 0.0)]
        mean: f64,
        /// Base volatility (bounded_sine).
        #[arg(long, default_value_t = 1.0)]
        sigma0: f64,
        /// Volatility modulation, |eps| < sigma0 (bounded_sine).
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Path index within the seed's ensemble.
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Output CSV (`-` for standard output); `<out-dir>/<family>-seed<seed>.csv` by default.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Large-time and renewal constants of Brownian motion with drift.
    #[command(allow_negative_numbers = true)]
    Constants {
        #[arg(long)]
        mu: f64,
        #[arg(short, long)]
        c: f64,
        /// Weight of the TV increment in E Z.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Weight of the path increment in E Z.
        #[arg(long, default_value_t = 0.0)]
        b: f64,
    },
    /// Run a Monte Carlo validation experiment.
    Experiment {
        #[arg(value_parser = parse_kind)]
        kind: ExperimentKind,
        /// JSON config document; the built-in default for `kind` otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Report path; `<out-dir>/<kind>-report.json` by default.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write per-sample values as CSV.
        #[arg(long)]
        samples_csv: Option<PathBuf>,
        /// Print the effective config and exit.
        #[arg(long)]
        print_config: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    BmDrift,
    Ou,
    BoundedSine,
}

fn parse_kind(s: &str) -> std::result::Result<ExperimentKind, String> {
    s.parse().map_err(|e: truncvar_core::Error| e.to_string())
}

pub fn run(cli: Cli) -> Result<()> {
    let out_dir = cli.out_dir;
    match cli.command {
        Command::Compute {
            input,
            c,
            total_variation,
            emit_process,
            emit_tube,
            output,
        } => compute(
            &input,
            c,
            total_variation,
            emit_process,
            emit_tube,
            output.as_deref(),
            &out_dir,
        ),
        Command::Simulate {
            family,
            mu,
            theta,
            mean,
            sigma0,
            eps,
            horizon,
            dt,
            seed,
            index,
            output,
        } => {
            let spec = match family {
                Family::BmDrift => DiffusionSpec::BmDrift { mu },
                Family::Ou => DiffusionSpec::Ou { theta, mean },
                Family::BoundedSine => DiffusionSpec::BoundedSine { sigma0, eps, mu },
            };
            simulate(spec, horizon, dt, seed, index, output.as_deref(), &out_dir)
        }
        Command::Constants { mu, c, a, b } => constants(mu, c, a, b),
        Command::Experiment {
            kind,
            config,
            output,
            samples_csv,
            print_config,
        } => experiment(
            kind,
            config.as_deref(),
            output.as_deref(),
            samples_csv.as_deref(),
            print_config,
            &out_dir,
        ),
    }
}

fn is_stdio(p: &Path) -> bool {
    p.as_os_str() == "-"
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

/// Runs `write` against `path`, or standard output for `-`.
fn write_to(path: &Path, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    if is_stdio(path) {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        write(&mut lock).map_err(|e| CliError::io("<stdout>", e))
    } else {
        let mut w = create(path)?;
        write(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| CliError::io(path, e))
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_to(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)
    })
}

fn csv_err(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

fn read_input(input: &Path) -> Result<SamplePath> {
    if is_stdio(input) {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::io("<stdin>", e))?;
        read_series(buf.as_slice(), "<stdin>")
    } else {
        let f = File::open(input).map_err(|e| CliError::io(input, e))?;
        read_series(BufReader::new(f), &input.display().to_string())
    }
}

#[derive(Serialize)]
struct ComputeDoc {
    input: String,
    c: f64,
    samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    totals: Option<TruncVarTotals>,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_variation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    process_csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tube: Option<TubeDoc>,
}

#[derive(Serialize)]
struct TubeDoc {
    alpha0: f64,
    csv: String,
}

fn compute(
    input: &Path,
    c: Option<f64>,
    plain_tv: bool,
    emit_process: bool,
    emit_tube: bool,
    output: Option<&Path>,
    out_dir: &Path,
) -> Result<()> {
    let threshold = if plain_tv {
        None
    } else {
        let c = c.ok_or_else(|| {
            CliError::Invalid("missing -c <C>; pass --total-variation for c = 0".into())
        })?;
        if c == 0.0 {
            return Err(CliError::Invalid(
                "c must be > 0; use --total-variation for the untruncated total variation".into(),
            ));
        }
        Some(Threshold::positive(c)?)
    };
    let p = read_input(input)?;
    let stem = if is_stdio(input) {
        "stdin".to_string()
    } else {
        input
            .file_stem()
            .map_or("series".into(), |s| s.to_string_lossy().into_owned())
    };
    let mut doc = ComputeDoc {
        input: input.display().to_string(),
        c: threshold.map_or(0.0, Threshold::get),
        samples: p.len(),
        totals: None,
        total_variation: None,
        process_csv: None,
        tube: None,
    };
    match threshold {
        None => doc.total_variation = Some(total_variation(&p)),
        Some(th) => {
            let curve = truncvar_curve(&p, th)?;
            let n = p.len() - 1;
            doc.totals = Some(TruncVarTotals {
                utv: curve.utv[n],
                dtv: curve.dtv[n],
                tv: curve.tv[n],
            });
            if emit_process {
                let path = out_dir.join(format!("{stem}.process.csv"));
                write_to(&path, |w| {
                    write_columns(
                        w,
                        &["time", "utv", "dtv", "tv"],
                        &[&curve.times, &curve.utv, &curve.dtv, &curve.tv],
                    )
                    .map_err(csv_err)
                })?;
                doc.process_csv = Some(path.display().to_string());
            }
            if emit_tube {
                let tube = tube_functions(&p, th)?;
                let path = out_dir.join(format!("{stem}.tube.csv"));
                write_to(&path, |w| {
                    write_columns(
                        w,
                        &["time", "value", "g0", "g"],
                        &[p.times(), p.values(), &tube.g0, &tube.g],
                    )
                    .map_err(csv_err)
                })?;
                doc.tube = Some(TubeDoc {
                    alpha0: tube.alpha0,
                    csv: path.display().to_string(),
                });
            }
        }
    }
    write_json(output.unwrap_or(Path::new("-")), &doc)
}

fn simulate(
    spec: DiffusionSpec,
    horizon: f64,
    dt: f64,
    seed: u64,
    index: u64,
    output: Option<&Path>,
    out_dir: &Path,
) -> Result<()> {
    spec.validate()?;
    let grid = GridSpec::new(horizon, dt)?;
    let rng = RngSeed::new(seed);
    let p = sample_path(spec, grid, &rng, index)?;
    let path = match output {
        Some(p) => p.to_path_buf(),
        None => out_dir.join(format!("{}-seed{seed}.csv", spec.family_name())),
    };
    write_to(&path, |w| write_series(w, &p).map_err(csv_err))?;
    if is_stdio(&path) {
        eprintln!("algorithm_id = {}", rng.algorithm_id);
    } else {
        println!("algorithm_id = {}", rng.algorithm_id);
        println!("rows = {}", p.len());
        println!("output = {}", path.display());
    }
    Ok(())
}

fn constants(mu: f64, c: f64, a: f64, b: f64) -> Result<()> {
    if c.is_nan() || c <= 0.0 {
        return Err(CliError::Invalid(format!("c must be > 0, got {c}")));
    }
    let rows = [
        ("m_mu_c", m_mu_c(mu, c)?),
        ("n_mu_c", n_mu_c(mu, c)?),
        ("sigma2_mu_c", sigma2_mu_c(mu, c)?),
        ("rho2_mu_c", rho2_mu_c(mu, c)?),
        ("mean_renewal_time", mean_renewal_time(mu, c)?),
        ("mean_z", mean_z(a, b, mu, c)?),
    ];
    for (k, v) in rows {
        println!("{k} = {v}");
    }
    Ok(())
}

fn experiment(
    kind: ExperimentKind,
    config: Option<&Path>,
    output: Option<&Path>,
    samples_csv: Option<&Path>,
    print_config: bool,
    out_dir: &Path,
) -> Result<()> {
    let cfg = match config {
        None => ExperimentConfig::default_for(kind),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let cfg: ExperimentConfig = serde_json::from_str(&text)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            if cfg.kind != kind {
                return Err(CliError::Invalid(format!(
                    "config is for {} but {kind} was requested",
                    cfg.kind
                )));
            }
            cfg
        }
    };
    cfg.validate()?;
    if print_config {
        return write_json(Path::new("-"), &cfg);
    }
    let report = run_experiment(&cfg)?;
    let path = match output {
        Some(p) => p.to_path_buf(),
        None => out_dir.join(format!("{kind}-report.json")),
    };
    write_json(&path, &report)?;
    if let Some(csv_path) = samples_csv {
        write_to(csv_path, |w| report.write_samples_csv(w))?;
    }

    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for r in &report.records {
        let verdict = match r.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Info => "info",
        };
        match (r.target, r.tolerance) {
            (Some(t), Some(tol)) => println!(
                "{verdict:4} {} = {} (target {}, tolerance {})",
                r.name,
                num(r.estimate),
                num(t),
                num(tol)
            ),
            _ => println!("{verdict:4} {} = {}", r.name, num(r.estimate)),
        }
    }
    if !is_stdio(&path) {
        println!("report = {}", path.display());
    }
    let failed: Vec<&str> = report.failures().map(|r| r.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verdict(format!(
            "{} verdict(s) failed: {}",
            failed.len(),
            failed.join(", ")
        )))
    }
}

/// Compact display: scientific notation for very small or large magnitudes.
fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e7).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}
