//! Oracle equivalence: every exterior eigenvalue of the deformed matrix found
//! by the dense eigensolver must be reproduced by the determinant-identity
//! root finder, and vice versa.

use std::collections::BTreeMap;

use crate::ensembles::{build_basis, deform, mix_seed, sample_wigner};
use crate::experiments::outlier_location::exterior_intervals;
use crate::experiments::report::{assemble_report, TrialOutcome};
use crate::experiments::{
    run_trials, ExperimentConfig, ExperimentError, ExperimentReport, SUBSEED_MATRIX, TAG_BASIS,
};
use crate::spectral::{deformed_eigenvalues_via_det, eigh, eigvalsh};

/// Per trial: the multiset of exterior eigenvalues from both routes and their
/// maximum pairwise deviation; pass when the multisets match within the
/// oracle tolerance.
pub fn run_oracle_check(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate_trials()?;
    let deformation = cfg.require_deformation()?;
    let n = cfg.ensemble.dim;
    let d = &deformation.eigenvalues;
    let basis = build_basis(
        &deformation.basis,
        n,
        deformation.rank(),
        mix_seed(cfg.master_seed, TAG_BASIS),
    )?;

    let outcomes = run_trials(cfg.workers, cfg.trials, |trial| {
        let seed = mix_seed(cfg.master_seed, trial);
        let h = sample_wigner(&cfg.ensemble, mix_seed(seed, SUBSEED_MATRIX));
        let deformed = deform(&h, d, &basis)?;
        let dec = eigh(&h)?;
        let lambda = dec.eigenvalues().to_vec();
        let mu = eigvalsh(&deformed)?;

        // Route one: exterior eigenvalues from the dense solver.
        let margin = 1e-6;
        let (lo, hi) = (lambda[0], lambda[n - 1]);
        let exterior_mu: Vec<f64> = mu
            .iter()
            .copied()
            .filter(|&x| x < lo - margin || x > hi + margin)
            .collect();

        // Route two: determinant-identity roots over the exterior intervals.
        let (left, right) = exterior_intervals(&lambda, d);
        let mut roots = Vec::new();
        for interval in [left, right].into_iter().flatten() {
            let step = (interval.1 - interval.0) / cfg.oracle.grid_points as f64;
            roots.extend(deformed_eigenvalues_via_det(&dec, &basis, d, interval, step)?);
        }
        roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));

        let mut warnings = Vec::new();
        for &x in &exterior_mu {
            if lambda.iter().any(|&l| (l - x).abs() < 1e-10) {
                warnings.push(format!(
                    "exterior eigenvalue {x} lies within 1e-10 of sigma(H)"
                ));
            }
        }

        let (statistic, pass) = if roots.len() != exterior_mu.len() {
            warnings.push(format!(
                "route mismatch: {} det-identity roots vs {} exterior eigenvalues",
                roots.len(),
                exterior_mu.len()
            ));
            (f64::INFINITY, false)
        } else {
            let dev = roots
                .iter()
                .zip(exterior_mu.iter())
                .fold(0.0f64, |acc, (r, m)| acc.max((r - m).abs()));
            (dev, dev <= cfg.oracle.tolerance)
        };

        Ok(TrialOutcome {
            records: vec![
                ("statistic".into(), statistic),
                ("exterior_count".into(), exterior_mu.len() as f64),
            ],
            pass,
            warnings,
        })
    })?;

    assemble_report(
        "oracle_check",
        cfg,
        outcomes,
        "statistic",
        BTreeMap::new(),
        BTreeMap::new(),
        Vec::new(),
    )
}
