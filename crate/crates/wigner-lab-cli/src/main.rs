//! `wigner-lab`: run the deformed-Wigner Monte Carlo experiments from the
//! command line and emit plot-ready CSV/JSON artifacts.
//!
//! Exit codes: 0 pass, 1 statistical failure, 2 configuration/usage error.

mod config;
mod emit;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use wigner_lab::experiments::{
    run_bbp_scan, run_delocalization, run_isotropic_law, run_oracle_check, run_outlier_distribution,
    run_outlier_location, run_rigidity, run_sticking, ExperimentReport,
};

use config::{CommonArgs, ConfigError};
use emit::RunManifest;

#[derive(Parser)]
#[command(
    name = "wigner-lab",
    version,
    about = "Monte Carlo laboratory for finite-rank deformations of Wigner matrices",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isotropic local semicircle law (interior and exterior grids).
    Isotropic(CommonArgs),
    /// Eigenvalue rigidity against the classical locations.
    Rigidity(CommonArgs),
    /// Isotropic delocalization of eigenvectors.
    Deloc {
        #[command(flatten)]
        common: CommonArgs,
        /// Direction recipe: "uniform" or "e1".
        #[arg(long)]
        vector: Option<String>,
    },
    /// Outlier locations against theta(d) = d + 1/d.
    OutlierLoc(CommonArgs),
    /// Outlier fluctuation law against the predicted Pi + Upsilon.
    OutlierDist {
        #[command(flatten)]
        common: CommonArgs,
        /// Monte Carlo draws of the predicted law.
        #[arg(long)]
        predicted_draws: Option<u64>,
        /// Two-sample KS threshold against the predicted law.
        #[arg(long)]
        ks_threshold: Option<f64>,
        /// One-sample KS threshold against the CLT normal reference.
        #[arg(long)]
        ks_normal_threshold: Option<f64>,
        /// Enforce the normal-reference band (delocalized directions only).
        #[arg(long)]
        enforce_normal_band: bool,
    },
    /// Eigenvalue sticking at the spectral edges.
    Sticking {
        #[command(flatten)]
        common: CommonArgs,
        /// Sticking strength psi scaling the statistic.
        #[arg(long)]
        psi: Option<f64>,
    },
    /// Phase-transition scan over d = 1 + w N^(-1/3).
    BbpScan {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated w grid.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        w_grid: Option<Vec<f64>>,
    },
    /// Determinant-identity roots vs dense eigensolver cross-check.
    OracleCheck(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Isotropic(_) => "isotropic",
            Command::Rigidity(_) => "rigidity",
            Command::Deloc { .. } => "deloc",
            Command::OutlierLoc(_) => "outlier-loc",
            Command::OutlierDist { .. } => "outlier-dist",
            Command::Sticking { .. } => "sticking",
            Command::BbpScan { .. } => "bbp-scan",
            Command::OracleCheck(_) => "oracle-check",
        }
    }

    fn common(&self) -> &CommonArgs {
        match self {
            Command::Isotropic(c)
            | Command::Rigidity(c)
            | Command::OutlierLoc(c)
            | Command::OracleCheck(c) => c,
            Command::Deloc { common, .. }
            | Command::OutlierDist { common, .. }
            | Command::Sticking { common, .. }
            | Command::BbpScan { common, .. } => common,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command) -> Result<bool, ConfigError> {
    let mut cfg = config::resolve(command.common())?;

    // Subcommand-specific overrides.
    match command {
        Command::Deloc { vector, .. } => {
            if let Some(v) = vector {
                cfg.delocalization.vector = config::parse_direction(v)?;
            }
        }
        Command::OutlierDist {
            predicted_draws,
            ks_threshold,
            ks_normal_threshold,
            enforce_normal_band,
            ..
        } => {
            if let Some(n) = predicted_draws {
                cfg.distribution.predicted_draws = *n;
            }
            if let Some(t) = ks_threshold {
                cfg.distribution.two_sample_threshold = *t;
            }
            if let Some(t) = ks_normal_threshold {
                cfg.distribution.normal_threshold = *t;
            }
            if *enforce_normal_band {
                cfg.distribution.enforce_normal_band = true;
            }
        }
        Command::Sticking { psi, .. } => {
            if let Some(p) = psi {
                cfg.sticking.psi = *p;
            }
        }
        Command::BbpScan { w_grid, .. } => {
            if let Some(ws) = w_grid {
                cfg.bbp.w_grid = ws.clone();
            }
        }
        _ => {}
    }

    let started = Instant::now();
    let report: ExperimentReport = match command {
        Command::Isotropic(_) => run_isotropic_law(&cfg)?,
        Command::Rigidity(_) => run_rigidity(&cfg)?,
        Command::Deloc { .. } => run_delocalization(&cfg)?,
        Command::OutlierLoc(_) => run_outlier_location(&cfg)?,
        Command::OutlierDist { .. } => run_outlier_distribution(&cfg)?,
        Command::Sticking { .. } => run_sticking(&cfg)?,
        Command::BbpScan { .. } => run_bbp_scan(&cfg)?,
        Command::OracleCheck(_) => run_oracle_check(&cfg)?,
    };
    let duration = started.elapsed().as_secs_f64();

    let manifest = RunManifest::new(command.name(), &cfg, duration);
    match &command.common().out {
        Some(dir) => {
            let paths = emit::emit_report(&report, &manifest, dir)?;
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
        }
        None => {
            emit::print_report(&report, &manifest)?;
        }
    }
    eprintln!(
        "{}: pass={} pass_fraction={:.4} ({:.2}s)",
        command.name(),
        report.pass,
        report.pass_fraction,
        duration
    );
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(report.pass)
}
