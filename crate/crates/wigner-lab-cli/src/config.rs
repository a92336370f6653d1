//! Flag parsing and configuration resolution.
//!
//! Precedence for every field: command-line flag, then `WIGNER_LAB_SEED`
//! (seed only), then `--config` JSON file, then built-in defaults. The config
//! file schema is the JSON serialization of `ExperimentConfig`.

use std::path::PathBuf;

use clap::Args;

use wigner_lab::ensembles::{
    BasisRecipe, DeformationSpec, EnsembleSpec, EntryFamily, SymmetryClass,
};
use wigner_lab::experiments::{DirectionRecipe, ExperimentConfig, ExperimentError};

pub const SEED_ENV_VAR: &str = "WIGNER_LAB_SEED";
const DEFAULT_DIM: usize = 100;

#[derive(Debug)]
pub enum ConfigError {
    Message(String),
    Experiment(ExperimentError),
    Io(std::io::Error),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Message(m) => write!(f, "{m}"),
            ConfigError::Experiment(e) => write!(f, "{e}"),
            ConfigError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<ExperimentError> for ConfigError {
    fn from(e: ExperimentError) -> Self {
        ConfigError::Experiment(e)
    }
}

impl From<std::io::Error> for ConfigError {
    fn from(e: std::io::Error) -> Self {
        ConfigError::Io(e)
    }
}

impl From<wigner_lab::ensembles::EnsembleError> for ConfigError {
    fn from(e: wigner_lab::ensembles::EnsembleError) -> Self {
        ConfigError::Experiment(ExperimentError::Ensemble(e))
    }
}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError::Message(msg.into())
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Symmetry class: 1 (real symmetric) or 2 (complex Hermitian).
    #[arg(long)]
    pub beta: Option<u8>,
    /// Entry family: gaussian, rademacher, skewed_two_point, uniform.
    #[arg(long)]
    pub family: Option<String>,
    /// Third-moment target for the skewed_two_point family.
    #[arg(long)]
    pub third_moment: Option<f64>,
    /// Matrix dimension N.
    #[arg(short = 'N', long = "dim")]
    pub dim: Option<usize>,
    /// Number of Monte Carlo trials.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed (fallback: WIGNER_LAB_SEED, then 42).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated deformation eigenvalues, e.g. "-d -2,0.5,2".
    #[arg(short = 'd', long = "deform", value_delimiter = ',', allow_hyphen_values = true)]
    pub deform: Option<Vec<f64>>,
    /// Basis recipe: standard_basis, uniform_vector, random_orthonormal,
    /// spike_plus_flat.
    #[arg(long)]
    pub basis: Option<String>,
    /// Empirical bound multiplier B.
    #[arg(long)]
    pub bound_multiplier: Option<f64>,
    /// Required pass fraction for bound experiments.
    #[arg(long)]
    pub pass_fraction_target: Option<f64>,
    /// Worker threads for trial execution (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory for CSV/JSON artifacts (default: JSON to stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON configuration file mirroring the flag structure.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn parse_family(name: &str, third_moment: Option<f64>) -> Result<EntryFamily, ConfigError> {
    match name {
        "gaussian" => Ok(EntryFamily::Gaussian),
        "rademacher" => Ok(EntryFamily::Rademacher),
        "uniform" => Ok(EntryFamily::Uniform),
        "skewed_two_point" => {
            let t = third_moment
                .ok_or_else(|| bad("family skewed_two_point requires --third-moment"))?;
            Ok(EntryFamily::SkewedTwoPoint { third_moment: t })
        }
        other => Err(bad(format!(
            "unknown family '{other}' (expected gaussian, rademacher, skewed_two_point, uniform)"
        ))),
    }
}

pub fn parse_basis(name: &str) -> Result<BasisRecipe, ConfigError> {
    match name {
        "standard_basis" | "standard" => Ok(BasisRecipe::StandardBasis),
        "uniform_vector" | "uniform" => Ok(BasisRecipe::UniformVector),
        "random_orthonormal" | "random" => Ok(BasisRecipe::RandomOrthonormal),
        "spike_plus_flat" | "spike" => Ok(BasisRecipe::SpikePlusFlat),
        other => Err(bad(format!(
            "unknown basis '{other}' (expected standard_basis, uniform_vector, \
             random_orthonormal, spike_plus_flat)"
        ))),
    }
}

pub fn parse_direction(name: &str) -> Result<DirectionRecipe, ConfigError> {
    match name {
        "uniform" => Ok(DirectionRecipe::Uniform),
        "e1" | "first_basis" => Ok(DirectionRecipe::FirstBasis),
        other => Err(bad(format!("unknown direction '{other}' (expected uniform, e1)"))),
    }
}

/// Resolve the experiment configuration from flags, environment, and the
/// optional config file.
pub fn resolve(args: &CommonArgs) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .map_err(|e| bad(format!("invalid config file {}: {e}", path.display())))?
        }
        None => ExperimentConfig::new(EnsembleSpec::goe(DEFAULT_DIM)),
    };

    if let Some(beta) = args.beta {
        cfg.ensemble.class = match beta {
            1 => SymmetryClass::RealSymmetric,
            2 => SymmetryClass::ComplexHermitian,
            other => return Err(bad(format!("beta must be 1 or 2, got {other}"))),
        };
    }
    if let Some(family) = &args.family {
        cfg.ensemble.family = parse_family(family, args.third_moment)?;
    } else if let Some(t) = args.third_moment {
        // Third moment alone retargets an already-skewed family.
        if let EntryFamily::SkewedTwoPoint { .. } = cfg.ensemble.family {
            cfg.ensemble.family = EntryFamily::SkewedTwoPoint { third_moment: t };
        } else {
            return Err(bad("--third-moment requires --family skewed_two_point"));
        }
    }
    if let Some(dim) = args.dim {
        if dim == 0 {
            return Err(bad("dimension must be positive"));
        }
        cfg.ensemble.dim = dim;
    }
    if let Some(trials) = args.trials {
        if trials == 0 {
            return Err(bad("trials must be positive"));
        }
        cfg.trials = trials;
    }
    cfg.master_seed = match args.seed {
        Some(s) => s,
        None => match std::env::var(SEED_ENV_VAR) {
            Ok(v) => v
                .parse()
                .map_err(|_| bad(format!("{SEED_ENV_VAR} must be a 64-bit integer")))?,
            Err(_) => cfg.master_seed,
        },
    };
    if let Some(b) = args.bound_multiplier {
        if b <= 0.0 {
            return Err(bad("bound multiplier must be positive"));
        }
        cfg.bound_multiplier = b;
    }
    if let Some(p) = args.pass_fraction_target {
        if !(0.0..=1.0).contains(&p) {
            return Err(bad("pass fraction target must lie in [0, 1]"));
        }
        cfg.pass_fraction_target = p;
    }
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(bad("workers must be positive"));
        }
        cfg.workers = Some(w);
    }

    // Deformation from flags (replaces any file-provided deformation).
    if let Some(deform) = &args.deform {
        let basis = match &args.basis {
            Some(name) => parse_basis(name)?,
            None => cfg
                .deformation
                .as_ref()
                .map(|d| d.basis.clone())
                .unwrap_or(BasisRecipe::UniformVector),
        };
        cfg.deformation = Some(DeformationSpec::new(deform.clone(), basis)?);
    } else if let Some(name) = &args.basis {
        let basis = parse_basis(name)?;
        if let Some(d) = &mut cfg.deformation {
            d.basis = basis;
        } else {
            return Err(bad("--basis requires -d/--deform or a config-file deformation"));
        }
    }

    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> CommonArgs {
        CommonArgs {
            beta: None,
            family: None,
            third_moment: None,
            dim: None,
            trials: None,
            seed: Some(7),
            deform: None,
            basis: None,
            bound_multiplier: None,
            pass_fraction_target: None,
            workers: None,
            out: None,
            config: None,
        }
    }

    #[test]
    fn defaults_resolve() {
        let cfg = resolve(&args()).unwrap();
        assert_eq!(cfg.ensemble.dim, DEFAULT_DIM);
        assert_eq!(cfg.master_seed, 7);
    }

    #[test]
    fn family_validation() {
        assert!(parse_family("gaussian", None).is_ok());
        assert!(parse_family("skewed_two_point", None).is_err());
        assert!(parse_family("skewed_two_point", Some(1.0)).is_ok());
        assert!(parse_family("cauchy", None).is_err());
    }

    #[test]
    fn deform_flag_builds_spec() {
        let mut a = args();
        a.deform = Some(vec![2.0, -2.0]);
        a.basis = Some("random_orthonormal".into());
        let cfg = resolve(&a).unwrap();
        let d = cfg.deformation.unwrap();
        assert_eq!(d.eigenvalues, vec![-2.0, 2.0]);
        assert_eq!(d.basis, BasisRecipe::RandomOrthonormal);
    }

    #[test]
    fn zero_trials_rejected() {
        let mut a = args();
        a.trials = Some(0);
        assert!(resolve(&a).is_err());
    }
}
