//! Isotropic local-law experiment: per trial, the maximum over a spectral
//! grid and direction pairs of the residual `|G_vw - m <v,w>|` rescaled by
//! the theoretical control parameter.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::ensembles::{mix_seed, rng_from_seed, sample_wigner};
use crate::experiments::report::{assemble_report, TrialOutcome};
use crate::experiments::{
    run_trials, ExperimentConfig, ExperimentError, ExperimentReport, SUBSEED_DIRECTIONS,
    SUBSEED_MATRIX,
};
use crate::spectral::eigh;
use crate::theory::SemicircleModel;

/// Random real unit direction.
pub(crate) fn random_unit_direction<R: rand::Rng>(n: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v = DVector::<f64>::from_fn(n, |_, _| StandardNormal.sample(rng));
        let norm = v.norm();
        if norm > 1e-8 {
            return v / norm;
        }
    }
}

pub(crate) fn lift(v: &DVector<f64>) -> DVector<Complex64> {
    v.map(|x| Complex64::new(x, 0.0))
}

/// Residuals `|G_vw - m <v,w>|` over the interior grid (scaled by `Psi`) and
/// the exterior grid (scaled by `sqrt(Im m / (N eta))`), maximized over the
/// grid and the direction pairs. A trial passes when the maximum ratio stays
/// below the bound multiplier.
pub fn run_isotropic_law(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate_trials()?;
    let model = SemicircleModel::new();
    let p = &cfg.isotropic;
    let n = cfg.ensemble.dim;
    if p.interior_e.is_empty() && p.exterior_e.is_empty() {
        return Err(ExperimentError::BadGrid("empty z-grid".into()));
    }
    if p.interior_eta.iter().any(|&eta| eta <= 0.0) || p.exterior_eta.iter().any(|&eta| eta <= 0.0)
    {
        return Err(ExperimentError::BadGrid("grid requires Im z > 0".into()));
    }
    if p.interior_e.iter().any(|&e| e.abs() > model.sigma) {
        return Err(ExperimentError::BadGrid(format!(
            "interior energies must satisfy |E| <= {}",
            model.sigma
        )));
    }
    if p
        .exterior_e
        .iter()
        .any(|&e| e.abs() <= 2.0 || e.abs() > model.sigma)
    {
        return Err(ExperimentError::BadGrid(format!(
            "exterior energies must satisfy 2 < |E| <= {}",
            model.sigma
        )));
    }
    let mut warnings = Vec::new();
    let edge_scale = cfg.bound_multiplier * (n as f64).powf(-2.0 / 3.0);
    for &e in &p.exterior_e {
        if e.abs() - 2.0 < edge_scale {
            warnings.push(format!(
                "exterior energy {e} is within B*N^(-2/3) = {edge_scale:.3e} of the edge"
            ));
        }
    }

    let outcomes = run_trials(cfg.workers, cfg.trials, |trial| {
        let seed = mix_seed(cfg.master_seed, trial);
        let h = sample_wigner(&cfg.ensemble, mix_seed(seed, SUBSEED_MATRIX));
        let dec = eigh(&h)?;
        let mut rng = rng_from_seed(mix_seed(seed, SUBSEED_DIRECTIONS));

        let mut pairs: Vec<(DVector<Complex64>, DVector<Complex64>)> = Vec::new();
        if p.include_basis_pair {
            let mut e1 = DVector::zeros(n);
            e1[0] = 1.0;
            let e1 = lift(&e1);
            pairs.push((e1.clone(), e1));
        }
        for _ in 0..p.vector_pairs {
            let v = lift(&random_unit_direction(n, &mut rng));
            let w = lift(&random_unit_direction(n, &mut rng));
            pairs.push((v, w));
        }

        let mut interior_max = 0.0f64;
        let mut exterior_max = 0.0f64;
        for (v, w) in &pairs {
            let pv = dec.projections(v);
            let pw = dec.projections(w);
            let inner: Complex64 = v.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
            let residual = |z: Complex64| -> f64 {
                let mut g = Complex64::new(0.0, 0.0);
                for alpha in 0..dec.dim() {
                    g += pv[alpha].conj() * pw[alpha]
                        / (Complex64::new(dec.eigenvalues()[alpha], 0.0) - z);
                }
                let m = model.stieltjes(z).expect("grid stays off the support");
                (g - m * inner).norm()
            };
            for &e in &p.interior_e {
                for &eta in &p.interior_eta {
                    let z = Complex64::new(e, eta);
                    let psi = model.control_params(z, n)?.psi_value;
                    interior_max = interior_max.max(residual(z) / psi);
                }
            }
            for &e in &p.exterior_e {
                for &eta in &p.exterior_eta {
                    let z = Complex64::new(e, eta);
                    let im_m = model.stieltjes(z).expect("exterior z").im;
                    let denom = (im_m / (n as f64 * eta)).sqrt();
                    exterior_max = exterior_max.max(residual(z) / denom);
                }
            }
        }
        let statistic = interior_max.max(exterior_max);
        Ok(TrialOutcome {
            records: vec![
                ("statistic".into(), statistic),
                ("interior_max".into(), interior_max),
                ("exterior_max".into(), exterior_max),
            ],
            pass: statistic <= cfg.bound_multiplier,
            warnings: Vec::new(),
        })
    })?;

    assemble_report(
        "isotropic",
        cfg,
        outcomes,
        "statistic",
        BTreeMap::new(),
        BTreeMap::new(),
        warnings,
    )
}
