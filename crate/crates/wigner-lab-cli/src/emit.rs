//! Deterministic CSV/JSON emission.
//!
//! Numbers are written in shortest round-trip decimal form (Rust's default
//! float formatting), so artifacts are byte-identical across reruns with the
//! same seed and any worker count. The emitted manifest omits the wall-clock
//! duration for the same reason; the duration is logged to stderr instead.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use wigner_lab::experiments::{ExperimentConfig, ExperimentReport};
use wigner_lab::stats::Summary;

use crate::config::ConfigError;

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub master_seed: u64,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_seconds: Option<f64>,
    pub config: ExperimentConfig,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: &ExperimentConfig, duration_seconds: f64) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            master_seed: config.master_seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_seconds: Some(duration_seconds),
            config: config.clone(),
        }
    }

    /// Copy with execution-level fields (wall-clock duration, worker count)
    /// stripped; artifacts must be byte-identical across reruns and worker
    /// counts with the same seed.
    fn stable(&self) -> RunManifest {
        let mut m = self.clone();
        m.duration_seconds = None;
        m.config.workers = None;
        m
    }
}

/// The `<name>_summary.json` document.
#[derive(Serialize)]
struct SummaryDoc<'a> {
    manifest: RunManifest,
    experiment: &'a str,
    trials: u64,
    primary: &'a str,
    pass_fraction: f64,
    pass: bool,
    metadata: &'a BTreeMap<String, f64>,
    summaries: &'a BTreeMap<String, Summary>,
    warnings: &'a [String],
}

fn artifact_stem(subcommand: &str) -> String {
    subcommand.replace('-', "_")
}

/// Render the samples CSV: header `trial,statistic[,component]`, rows in
/// trial order.
fn render_csv(report: &ExperimentReport) -> String {
    let multi = report.samples.iter().any(|r| r.component != "statistic");
    let mut out = String::new();
    if multi {
        out.push_str("trial,statistic,component\n");
    } else {
        out.push_str("trial,statistic\n");
    }
    for r in &report.samples {
        if multi {
            let _ = writeln!(out, "{},{},{}", r.trial, r.value, r.component);
        } else {
            let _ = writeln!(out, "{},{}", r.trial, r.value);
        }
    }
    out
}

fn render_summary(report: &ExperimentReport, manifest: &RunManifest) -> Result<String, ConfigError> {
    let doc = SummaryDoc {
        manifest: manifest.stable(),
        experiment: &report.experiment,
        trials: report.trials,
        primary: &report.primary,
        pass_fraction: report.pass_fraction,
        pass: report.pass,
        metadata: &report.metadata,
        summaries: &report.summaries,
        warnings: &report.warnings,
    };
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| ConfigError::Message(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Write `<name>_samples.csv` and `<name>_summary.json`; returns the paths.
pub fn emit_report(
    report: &ExperimentReport,
    manifest: &RunManifest,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, ConfigError> {
    std::fs::create_dir_all(out_dir)?;
    let stem = artifact_stem(&manifest.subcommand);
    let csv_path = out_dir.join(format!("{stem}_samples.csv"));
    let json_path = out_dir.join(format!("{stem}_summary.json"));
    std::fs::write(&csv_path, render_csv(report))?;
    std::fs::write(&json_path, render_summary(report, manifest)?)?;
    Ok(vec![csv_path, json_path])
}

/// Print the full report (manifest, summaries, and samples) as JSON to
/// standard output.
pub fn print_report(report: &ExperimentReport, manifest: &RunManifest) -> Result<(), ConfigError> {
    #[derive(Serialize)]
    struct FullDoc<'a> {
        manifest: RunManifest,
        report: &'a ExperimentReport,
    }
    let doc = FullDoc {
        manifest: manifest.stable(),
        report,
    };
    let text = serde_json::to_string_pretty(&doc)
        .map_err(|e| ConfigError::Message(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use wigner_lab::ensembles::EnsembleSpec;
    use wigner_lab::experiments::run_rigidity;

    #[test]
    fn manifest_round_trips_losslessly() {
        let cfg = ExperimentConfig::new(EnsembleSpec::goe(16));
        let manifest = RunManifest::new("rigidity", &cfg, 1.25);
        let text = serde_json::to_string(&manifest).unwrap();
        let back: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back.subcommand, manifest.subcommand);
        assert_eq!(back.master_seed, manifest.master_seed);
        assert_eq!(back.duration_seconds, manifest.duration_seconds);
        assert_eq!(back.config.ensemble, manifest.config.ensemble);
    }

    #[test]
    fn csv_has_header_plus_row_per_trial() {
        let mut cfg = ExperimentConfig::new(EnsembleSpec::goe(24));
        cfg.trials = 3;
        let report = run_rigidity(&cfg).unwrap();
        let csv = render_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "trial,statistic");
        assert!(lines[1].starts_with("0,"));
    }
}
