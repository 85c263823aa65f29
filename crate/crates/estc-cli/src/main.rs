//! `estc`: dispersion, coefficient, observable, precession and field-sweep
//! driver for the chiral space-time crystal solver.
//!
//! Configuration resolves as defaults < config file < flags; the effective
//! configuration is echoed into every output. Cached solutions are keyed
//! by exact parameter bits (`--cache-dir` or `ESTC_CACHE_DIR`), so warm
//! runs are byte-identical to cold ones.

mod cache;
mod commands;
mod config;
mod output;

use anyhow::Result;
use clap::{Parser, Subcommand};
use config::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "estc",
    about = "Dirac electron in a chiral electromagnetic space-time crystal",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat key = value configuration file, overridden by flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Dimensionless lattice frequency.
    #[arg(long, global = true)]
    omega: Option<f64>,

    /// Wave amplitude A_m.
    #[arg(long, global = true)]
    am: Option<f64>,

    /// Harmonic cutoff (even, >= 4).
    #[arg(long, global = true)]
    gmax: Option<usize>,

    /// Quasimomentum grid: pow:BASE:M_MIN:M_MAX (q1 = BASE^m * omega) or
    /// list:V1,V2,...
    #[arg(long = "q1-grid", global = true)]
    q1_grid: Option<String>,

    /// Momentum ratio q_m = 2 q1 / omega of the field sample.
    #[arg(long, global = true)]
    qm: Option<f64>,

    /// Mixing angle in [0, pi/2].
    #[arg(long, global = true)]
    alpha: Option<f64>,

    /// Mixing phase in [0, 2 pi).
    #[arg(long, global = true)]
    delta: Option<f64>,

    /// Field sampling grid N1xN4.
    #[arg(long, global = true)]
    grid: Option<String>,

    /// Superposition mode: uni+ | uni- | bi1 | bi2.
    #[arg(long, global = true)]
    mode: Option<String>,

    /// Output format: csv | json.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Output path ('-' for stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for grid sweeps (0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Solution cache directory (also ESTC_CACHE_DIR).
    #[arg(long = "cache-dir", global = true)]
    cache_dir: Option<PathBuf>,

    /// Tolerance override NAME=VALUE for the check suite (repeatable).
    #[arg(long = "tol", global = true)]
    tol: Vec<String>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Branch offsets xi and residuals over the quasimomentum grid.
    Dispersion,
    /// Starting Fourier coefficients over the grid.
    Coeffs,
    /// Energy, velocity, momentum and spin means of both families.
    Observables,
    /// Precession amplitudes R_v, R_s and frequency.
    Precession,
    /// Velocity and spin textures of a superposition on an (x1, x4) grid.
    Fields,
    /// Structural invariant suite; nonzero exit on any failure.
    Check,
}

fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    let mut flag = |key: &str, value: Option<String>| -> Result<()> {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
        Ok(())
    };
    flag("omega", cli.omega.map(|v| v.to_string()))?;
    flag("am", cli.am.map(|v| v.to_string()))?;
    flag("gmax", cli.gmax.map(|v| v.to_string()))?;
    flag("q1_grid", cli.q1_grid.clone())?;
    flag("qm", cli.qm.map(|v| v.to_string()))?;
    flag("alpha", cli.alpha.map(|v| v.to_string()))?;
    flag("delta", cli.delta.map(|v| v.to_string()))?;
    flag("grid", cli.grid.clone())?;
    flag("mode", cli.mode.clone())?;
    flag("format", cli.format.clone())?;
    flag(
        "out",
        cli.out.as_ref().map(|p| p.display().to_string()),
    )?;
    flag("jobs", cli.jobs.map(|v| v.to_string()))?;
    flag(
        "cache_dir",
        cli.cache_dir.as_ref().map(|p| p.display().to_string()),
    )?;
    for spec in &cli.tol {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| anyhow::anyhow!("--tol expects NAME=VALUE, got `{spec}`"))?;
        cfg.set(&format!("tol.{name}"), value)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(2);
        }
    };
    let outcome = match cli.command {
        Command::Dispersion => commands::dispersion(&cfg),
        Command::Coeffs => commands::coeffs(&cfg),
        Command::Observables => commands::observables(&cfg),
        Command::Precession => commands::precession_cmd(&cfg),
        Command::Fields => commands::fields_cmd(&cfg),
        Command::Check => commands::check(&cfg),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
