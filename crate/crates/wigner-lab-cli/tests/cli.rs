//! End-to-end CLI checks: exit codes, artifact schemas, and byte-level
//! determinism across reruns and worker counts.

use std::path::Path;
use std::process::Command;

use sha2::{Digest, Sha256};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wigner-lab"))
}

fn sha256(path: &Path) -> String {
    let bytes = std::fs::read(path).unwrap();
    format!("{:x}", Sha256::digest(&bytes))
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn zero_trials_exits_2() {
    let out = bin()
        .args(["rigidity", "-N", "16", "--trials", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_deformation_exits_2() {
    let out = bin()
        .args(["outlier-loc", "-N", "32", "--trials", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_out_prints_json_to_stdout() {
    let out = bin()
        .args(["rigidity", "-N", "32", "--trials", "2", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["manifest"]["subcommand"], "rigidity");
    assert_eq!(doc["report"]["trials"], 2);
    assert!(doc["manifest"]["duration_seconds"].is_null());
}

#[test]
fn emits_csv_and_json_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "outlier-loc",
            "--beta",
            "1",
            "--family",
            "gaussian",
            "-N",
            "96",
            "-d",
            "2",
            "--basis",
            "uniform_vector",
            "--trials",
            "3",
            "--seed",
            "42",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("outlier_loc_samples.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "trial,statistic,component");
    // 3 trials x statistic plus oracle_dev rows on checked trials.
    assert!(lines.len() > 3);
    let doc: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("outlier_loc_summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(doc["manifest"]["master_seed"], 42);
    assert_eq!(doc["primary"], "statistic");
    let ecdf = doc["summaries"]["statistic"]["ecdf_x"].as_array().unwrap();
    assert_eq!(ecdf.len(), 512);
}

#[test]
fn determinism_across_reruns_and_worker_counts() {
    let base = tempfile::tempdir().unwrap();
    let mut hashes = Vec::new();
    for (label, workers) in [("a", "1"), ("b", "8"), ("c", "1")] {
        let dir = base.path().join(label);
        let out = bin()
            .args([
                "sticking",
                "-N",
                "64",
                "-d",
                "0.5",
                "--trials",
                "6",
                "--seed",
                "1234",
                "--workers",
                workers,
                "--out",
            ])
            .arg(&dir)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        hashes.push((
            sha256(&dir.join("sticking_samples.csv")),
            sha256(&dir.join("sticking_summary.json")),
        ));
    }
    assert_eq!(hashes[0], hashes[1], "1 vs 8 workers");
    assert_eq!(hashes[0], hashes[2], "rerun with same seed");
}

#[test]
fn seed_env_var_is_fallback() {
    let with_env = bin()
        .args(["rigidity", "-N", "24", "--trials", "2"])
        .env("WIGNER_LAB_SEED", "777")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&with_env.stdout).unwrap();
    assert_eq!(doc["manifest"]["master_seed"], 777);

    // Explicit flag wins over the environment.
    let with_flag = bin()
        .args(["rigidity", "-N", "24", "--trials", "2", "--seed", "5"])
        .env("WIGNER_LAB_SEED", "777")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&with_flag.stdout).unwrap();
    assert_eq!(doc["manifest"]["master_seed"], 5);
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    std::fs::write(
        &cfg_path,
        r#"{
            "ensemble": {"class": "real_symmetric", "family": {"name": "gaussian"}, "dim": 48},
            "trials": 3,
            "master_seed": 9,
            "bound_multiplier": 10.0,
            "pass_fraction_target": 0.99
        }"#,
    )
    .unwrap();
    let out = bin()
        .args(["rigidity", "--config"])
        .arg(&cfg_path)
        .args(["--trials", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // Flag overrides the file; file supplies the rest.
    assert_eq!(doc["report"]["trials"], 2);
    assert_eq!(doc["manifest"]["master_seed"], 9);
    assert_eq!(doc["manifest"]["config"]["ensemble"]["dim"], 48);
}

#[test]
fn bbp_scan_accepts_negative_w() {
    let out = bin()
        .args([
            "bbp-scan", "-N", "48", "--trials", "2", "--seed", "3", "--w-grid", "5,-5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["report"]["summaries"]["edge_shift_w=5"].is_object());
    assert!(doc["report"]["summaries"]["gap_w=-5"].is_object());
}

#[test]
fn statistical_failure_exits_1() {
    // An absurdly small bound multiplier forces a statistical failure.
    let out = bin()
        .args([
            "rigidity", "-N", "48", "--trials", "4", "--seed", "2", "--bound-multiplier", "0.001",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
