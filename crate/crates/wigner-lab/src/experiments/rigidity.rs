//! Eigenvalue rigidity: per trial, the maximum over `alpha` of
//! `N^(2/3) min(alpha, N+1-alpha)^(1/3) |lambda_alpha - gamma_alpha|`.

use std::collections::BTreeMap;

use crate::ensembles::{mix_seed, sample_wigner};
use crate::experiments::report::{assemble_report, TrialOutcome};
use crate::experiments::{
    run_trials, ExperimentConfig, ExperimentError, ExperimentReport, SUBSEED_MATRIX,
};
use crate::spectral::eigvalsh;
use crate::theory::SemicircleModel;

/// The rigidity statistic for one sorted spectrum against the classical
/// locations.
pub(crate) fn rigidity_statistic(eigenvalues: &[f64], gamma: &[f64]) -> f64 {
    let n = eigenvalues.len();
    let n23 = (n as f64).powf(2.0 / 3.0);
    let mut worst = 0.0f64;
    for (idx, (&l, &g)) in eigenvalues.iter().zip(gamma.iter()).enumerate() {
        let alpha = idx + 1;
        let weight = (alpha.min(n + 1 - alpha) as f64).powf(1.0 / 3.0);
        worst = worst.max(n23 * weight * (l - g).abs());
    }
    worst
}

/// Per trial the rigidity max-statistic; pass when it stays below the bound
/// multiplier.
pub fn run_rigidity(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate_trials()?;
    let model = SemicircleModel::new();
    let gamma = model.classical_locations(cfg.ensemble.dim)?;

    let outcomes = run_trials(cfg.workers, cfg.trials, |trial| {
        let seed = mix_seed(cfg.master_seed, trial);
        let h = sample_wigner(&cfg.ensemble, mix_seed(seed, SUBSEED_MATRIX));
        let eigenvalues = eigvalsh(&h)?;
        let statistic = rigidity_statistic(&eigenvalues, &gamma);
        Ok(TrialOutcome {
            records: vec![("statistic".into(), statistic)],
            pass: statistic <= cfg.bound_multiplier,
            warnings: Vec::new(),
        })
    })?;

    assemble_report(
        "rigidity",
        cfg,
        outcomes,
        "statistic",
        BTreeMap::new(),
        BTreeMap::new(),
        Vec::new(),
    )
}
