//! Command implementations behind the `whichway` binary.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bohm::{integrate_trajectory, trajectory_ensemble, Trajectory, DEFAULT_STEPS};
use crate::config::{parse_config, ConfigFile, ExperimentConfig, SweepParameter};
use crate::error::{Error, Result};
use crate::interference::experiment::{run_experiment, RunStats};
use crate::interference::{
    duality_check, DualityReport, FringeMetrics, ModelKind, ScreenHistogram,
};
use crate::output::{
    histogram_csv, sweep_csv, to_json, write_file, write_trajectories_csv, SweepRow,
};
use crate::rng::substream;
use crate::uncertainty::{build_budget, whichway_feasible, Feasibility, UncertaintyBudget};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerance used for the duality verdict in summaries.
pub const DUALITY_TOLERANCE: f64 = 0.05;

/// Momentum precision target used for the feasibility block of a run summary.
pub const FEASIBILITY_PRECISION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub version: String,
    pub config: ConfigFile,
    pub metrics: FringeMetrics,
    pub duality: DualityReport,
    pub mean_snr: f64,
    pub mean_omega_red: f64,
    pub stats: RunStats,
    pub feasibility: Option<Feasibility>,
    pub wall_time_s: f64,
}

/// Which-way bound for the configured plate: speed decrease `1 - 1/n` and the
/// default momentum precision. `None` when the plate does not slow light.
pub fn feasibility_for(config: &ExperimentConfig) -> Option<Feasibility> {
    let s = 1.0 - 1.0 / config.medium_n;
    let budget = build_budget(config.geometry.wavelength, s, FEASIBILITY_PRECISION).ok()?;
    whichway_feasible(config.geometry.slit_separation, &budget).ok()
}

pub fn run_summary(config: &ExperimentConfig) -> Result<(ScreenHistogram, RunSummary)> {
    let started = Instant::now();
    let outcome = run_experiment(config, config.n_photons, config.seed)?;
    let summary = RunSummary {
        version: VERSION.to_string(),
        config: config.to_file(),
        duality: duality_check(&outcome.metrics, DUALITY_TOLERANCE),
        metrics: outcome.metrics,
        mean_snr: outcome.stats.mean_snr,
        mean_omega_red: outcome.stats.mean_omega_red,
        stats: outcome.stats,
        feasibility: feasibility_for(config),
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    Ok((outcome.histogram, summary))
}

/// Write `histogram.csv` and `summary.json` into `out_dir`.
pub fn cmd_run(config: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let (hist, summary) = run_summary(config)?;
    write_file(&out_dir.join("histogram.csv"), &histogram_csv(&hist))?;
    write_file(&out_dir.join("summary.json"), &to_json(&summary))?;
    Ok(summary)
}

/// One run per value. Every row reuses the root seed, so rows differ only
/// through the swept parameter.
pub fn sweep_rows(
    config: &ExperimentConfig,
    parameter: SweepParameter,
    values: &[String],
) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::domain("values", "at least one value is required"));
    }
    let configs = values
        .iter()
        .map(|v| parameter.apply(config, v))
        .collect::<Result<Vec<_>>>()?;
    configs
        .iter()
        .zip(values)
        .map(|(cfg, value)| {
            let out = run_experiment(cfg, cfg.n_photons, cfg.seed)?;
            Ok(SweepRow {
                value: value.trim().to_string(),
                visibility: out.metrics.visibility,
                distinguishability: out.metrics.distinguishability,
                duality: out.metrics.duality,
                mean_omega_red: out.stats.mean_omega_red,
            })
        })
        .collect()
}

pub fn cmd_sweep(
    config: &ExperimentConfig,
    parameter: &str,
    values: &[String],
    out: &Path,
) -> Result<Vec<SweepRow>> {
    let parameter = SweepParameter::parse(parameter)?;
    let rows = sweep_rows(config, parameter, values)?;
    write_file(out, &sweep_csv(&rows))?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub budget: UncertaintyBudget,
    pub verdict: Option<Feasibility>,
}

impl FeasibilityReport {
    pub fn render(&self) -> String {
        let b = &self.budget;
        let mut s = String::new();
        let _ = writeln!(s, "wavelength_m      {:.6e}", b.lambda);
        let _ = writeln!(s, "speed_decrease    {}", b.speed_decrease);
        let _ = writeln!(s, "precision         {}", b.precision);
        let _ = writeln!(s, "p_m_kg_m_s        {:.6e}", b.p_m);
        let _ = writeln!(s, "delta_p_m_kg_m_s  {:.6e}", b.delta_p_m);
        let _ = writeln!(s, "delta_x_min_m     {:.6e}", b.delta_x_min);
        if let Some(v) = &self.verdict {
            let _ = writeln!(s, "x1_m              {:.6e}", v.x1);
            let _ = writeln!(s, "margin            {:.6}", v.margin);
            let _ = writeln!(
                s,
                "verdict           {}",
                if v.feasible { "feasible" } else { "infeasible" }
            );
        }
        s
    }
}

pub fn cmd_feasibility(lambda: f64, s: f64, f: f64, x1: Option<f64>) -> Result<FeasibilityReport> {
    let budget = build_budget(lambda, s, f)?;
    let verdict = x1.map(|x| whichway_feasible(x, &budget)).transpose()?;
    Ok(FeasibilityReport { budget, verdict })
}

/// Trajectories for `cmd_bohm`: one from `x0` when given, otherwise `n`
/// launches drawn from the slit-plane density with substream `(seed, "bohm", 0)`.
pub fn bohm_trajectories(
    config: &ExperimentConfig,
    n: usize,
    x0: Option<f64>,
    steps: usize,
) -> Result<(Vec<Trajectory>, ScreenHistogram)> {
    let g = &config.geometry;
    g.validate()?;
    let step = g.distance / steps.max(1) as f64;
    match x0 {
        Some(x) => {
            let t = integrate_trajectory(x, g, step)?;
            let mut hist = ScreenHistogram::empty(&g.bin_edges());
            let bin = hist.bin_of(t.endpoint());
            hist.record(bin);
            Ok((vec![t], hist))
        }
        None => trajectory_ensemble(n, g, step, &mut substream(config.seed, "bohm", 0)),
    }
}

pub fn cmd_bohm(
    config: &ExperimentConfig,
    n: usize,
    x0: Option<f64>,
    steps: usize,
    stride: usize,
    out: &Path,
) -> Result<ScreenHistogram> {
    let (trajectories, hist) = bohm_trajectories(config, n, x0, steps)?;
    let file = File::create(out).map_err(|e| Error::io(out, e))?;
    let mut w = BufWriter::new(file);
    write_trajectories_csv(&mut w, &trajectories, stride).map_err(|e| Error::io(out, e))?;
    std::io::Write::flush(&mut w).map_err(|e| Error::io(out, e))?;
    Ok(hist)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelComparison {
    pub model: ModelKind,
    pub metrics: FringeMetrics,
    pub duality: DualityReport,
}

pub fn cmd_compare_models(config: &ExperimentConfig) -> Result<Vec<ModelComparison>> {
    [ModelKind::Orthodox, ModelKind::LocalPassive]
        .into_iter()
        .map(|model| {
            let cfg = ExperimentConfig {
                model,
                ..config.clone()
            };
            let out = run_experiment(&cfg, cfg.n_photons, cfg.seed)?;
            Ok(ModelComparison {
                model,
                duality: duality_check(&out.metrics, DUALITY_TOLERANCE),
                metrics: out.metrics,
            })
        })
        .collect()
}

pub fn comparison_table(rows: &[ModelComparison]) -> String {
    let mut s = format!(
        "{:<14} {:>10} {:>10} {:>10} {:>10} {:>8}\n",
        "model", "V", "D", "V2+D2", "V0", "duality"
    );
    for r in rows {
        let m = &r.metrics;
        let _ = writeln!(
            s,
            "{:<14} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>8}",
            r.model.as_str(),
            m.visibility,
            m.distinguishability,
            m.duality,
            m.baseline_visibility,
            if r.duality.passes { "ok" } else { "VIOLATED" }
        );
    }
    s
}

#[derive(Debug, Parser)]
#[command(
    name = "whichway",
    version,
    about = "Which-way double-slit Monte Carlo"
)]
pub struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment and write histogram.csv and summary.json.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Vary one parameter (R, L, g, T or model) and write sweep.csv.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
    },
    /// Minimum slit separation for resolving the plate momentum.
    Feasibility {
        #[arg(long, default_value_t = 630e-9)]
        wavelength: f64,
        /// Fractional speed decrease in the plate.
        #[arg(long, default_value_t = 0.2)]
        s: f64,
        /// Fractional momentum precision.
        #[arg(long, default_value_t = 0.1)]
        f: f64,
        /// Slit separation to judge, m.
        #[arg(long)]
        x1: Option<f64>,
    },
    /// Integrate streamlines of the unmeasured field and write trajectories.csv.
    Bohm {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Launch a single trajectory from this slit-plane position instead.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        /// Write every n-th sample of each polyline.
        #[arg(long, default_value_t = 16)]
        stride: usize,
        #[arg(long, default_value = "trajectories.csv")]
        out: PathBuf,
    },
    /// Run both models on one config and print a metrics table.
    CompareModels {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the table as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Option<PathBuf>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => parse_config(p),
        None => Ok(ExperimentConfig::default()),
    }
}

/// Execute a parsed command line, returning text for stdout.
pub fn dispatch(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Run { config, out } => {
            let s = cmd_run(&load(config)?, out)?;
            Ok(format!(
                "V = {:.6}  D = {:.6}  V0 = {:.6}  V2+D2 = {:.6}  -> {}\n",
                s.metrics.visibility,
                s.metrics.distinguishability,
                s.metrics.baseline_visibility,
                s.metrics.duality,
                out.display()
            ))
        }
        Command::Sweep {
            config,
            param,
            values,
            out,
        } => {
            let rows = cmd_sweep(&load(config)?, param, values, out)?;
            Ok(sweep_csv(&rows))
        }
        Command::Feasibility {
            wavelength,
            s,
            f,
            x1,
        } => Ok(cmd_feasibility(*wavelength, *s, *f, *x1)?.render()),
        Command::Bohm {
            config,
            n,
            x0,
            steps,
            stride,
            out,
        } => {
            let hist = cmd_bohm(&load(config)?, *n, *x0, *steps, *stride, out)?;
            Ok(format!(
                "{} trajectories -> {}\n",
                hist.total,
                out.display()
            ))
        }
        Command::CompareModels { config, out } => {
            let rows = cmd_compare_models(&load(config)?)?;
            if let Some(path) = out {
                write_file(path, &to_json(&rows))?;
            }
            Ok(comparison_table(&rows))
        }
    }
}

/// Run `dispatch` on a pool of `cli.workers` threads (all cores when unset).
pub fn run_cli(cli: &Cli) -> Result<String> {
    match cli.workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::domain("workers", e.to_string()))?;
            pool.install(|| dispatch(cli))
        }
        None => dispatch(cli),
    }
}

/// `error[CODE]: message` on one line.
pub fn error_line(err: &Error) -> String {
    let msg = err.to_string().replace(['\n', '\r'], " ");
    format!("error[{}]: {}", err.code(), msg.trim())
}
