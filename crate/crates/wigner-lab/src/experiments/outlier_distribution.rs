//! Outlier fluctuations: the empirical law of the rescaled outlier against
//! the predicted `Pi + Upsilon`, via a two-sample KS test against a Monte
//! Carlo of the predicted law (fed by exact resampling of `N^(1/2) <v,Hv>`)
//! and a one-sample KS test against the CLT normal reference.

use std::collections::BTreeMap;

use rand_distr::{Distribution, StandardNormal};

use crate::ensembles::{build_basis, deform, mix_seed, rng_from_seed, sample_wigner};
use crate::experiments::outlier_location::{
    check_interlacing, deformation_condition_warnings, oracle_deviation, oracle_stride,
    outlier_component,
};
use crate::experiments::quadform::QuadraticFormSampler;
use crate::experiments::report::{assemble_report, TrialOutcome};
use crate::experiments::{
    run_trials, ExperimentConfig, ExperimentError, ExperimentReport, SUBSEED_MATRIX, TAG_BASIS,
    TAG_PREDICTED,
};
use crate::spectral::eigvalsh;
use crate::stats::ReferenceLaw;
use crate::theory::{outlier_law, sample_predicted_outlier, theta};

/// Collect the rescaled outlier samples and compare them with the predicted
/// law. Requires at least 50 trials and one tracked outlier.
pub fn run_outlier_distribution(
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate_trials()?;
    if cfg.trials < 50 {
        return Err(ExperimentError::TooFewTrials(cfg.trials));
    }
    let deformation = cfg.require_deformation()?;
    let tracked = deformation.outlier_indices();
    if tracked.is_empty() {
        return Err(ExperimentError::NoOutliers);
    }
    let n = cfg.ensemble.dim;
    let nf = n as f64;
    let warnings = deformation_condition_warnings(cfg, deformation);
    let basis = build_basis(
        &deformation.basis,
        n,
        deformation.rank(),
        mix_seed(cfg.master_seed, TAG_BASIS),
    )?;
    let moments = crate::ensembles::moment_matrices_of(&cfg.ensemble);
    let stride = oracle_stride(cfg.trials, cfg.oracle.check_trials);

    // Predicted-law Monte Carlo per tracked outlier, from one reserved stream.
    let mut metadata = BTreeMap::new();
    let mut references: BTreeMap<String, Vec<(ReferenceLaw, Option<f64>)>> = BTreeMap::new();
    let mut rng = rng_from_seed(mix_seed(cfg.master_seed, TAG_PREDICTED));
    for &i in &tracked {
        let d = deformation.eigenvalues[i];
        let v = basis.column(i).into_owned();
        let law = outlier_law(d, &v, &moments, cfg.ensemble.beta())?;
        let sampler = QuadraticFormSampler::new(&cfg.ensemble, &v);
        let predicted: Vec<f64> = (0..cfg.distribution.predicted_draws)
            .map(|_| {
                let hv = sampler.sample(&mut rng);
                let z: f64 = StandardNormal.sample(&mut rng);
                sample_predicted_outlier(&law, hv, z)
            })
            .collect();
        let (normal_mean, normal_var) = law.asymptotic_normal();
        let component = outlier_component(deformation, &tracked, i);
        metadata.insert(format!("theta_d={d}"), theta(d)?);
        metadata.insert(format!("predicted_mean_shift_d={d}"), law.pi_mean_shift);
        metadata.insert(format!("predicted_variance_d={d}"), normal_var);
        references.insert(
            component,
            vec![
                (
                    ReferenceLaw::Empirical { samples: predicted },
                    Some(cfg.distribution.two_sample_threshold),
                ),
                (
                    ReferenceLaw::Normal {
                        mean: normal_mean,
                        variance: normal_var,
                    },
                    cfg.distribution
                        .enforce_normal_band
                        .then_some(cfg.distribution.normal_threshold),
                ),
            ],
        );
    }

    let outcomes = run_trials(cfg.workers, cfg.trials, |trial| {
        let seed = mix_seed(cfg.master_seed, trial);
        let h = sample_wigner(&cfg.ensemble, mix_seed(seed, SUBSEED_MATRIX));
        let deformed = deform(&h, &deformation.eigenvalues, &basis)?;
        let lambda = eigvalsh(&h)?;
        let mu = eigvalsh(&deformed)?;

        let mut warnings = Vec::new();
        if let Some(w) = check_interlacing(&lambda, &mu, &deformation.eigenvalues) {
            warnings.push(w);
        }

        let mut records = Vec::new();
        let mut tracked_mu = Vec::new();
        let mut pass = true;
        for &i in &tracked {
            let d = deformation.eigenvalues[i];
            let alpha = deformation.outlier_eigenvalue_index(i, n);
            let x = nf.sqrt() * (d.abs() - 1.0).powf(-0.5) * (mu[alpha] - theta(d)?);
            records.push((outlier_component(deformation, &tracked, i), x));
            tracked_mu.push((i, mu[alpha]));
            pass = pass && x.abs() <= cfg.bound_multiplier;
        }

        if trial % stride == 0 {
            let (dev, oracle_warnings) = oracle_deviation(
                &h,
                &basis,
                deformation,
                &tracked_mu,
                &lambda,
                cfg.oracle.grid_points,
            )?;
            warnings.extend(oracle_warnings);
            records.push(("oracle_dev".into(), dev));
            if dev > cfg.oracle.tolerance {
                warnings.push(format!(
                    "determinant-identity roots deviate by {dev:.3e} (tolerance {:.1e})",
                    cfg.oracle.tolerance
                ));
                pass = false;
            }
        }

        Ok(TrialOutcome {
            records,
            pass,
            warnings,
        })
    })?;

    assemble_report(
        "outlier_distribution",
        cfg,
        outcomes,
        "statistic",
        references,
        metadata,
        warnings,
    )
}
