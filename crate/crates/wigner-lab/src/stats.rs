//! Summary statistics for experiment samples: moments, a fixed-grid ECDF, and
//! exact one- and two-sample Kolmogorov-Smirnov distances.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of points in the serialized ECDF grid.
pub const ECDF_GRID_LEN: usize = 512;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("cannot summarize an empty sample set")]
    EmptySamples,
}

/// Reference law for a KS comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "law")]
pub enum ReferenceLaw {
    Normal { mean: f64, variance: f64 },
    Uniform { lo: f64, hi: f64 },
    /// Empirical reference (two-sample KS).
    Empirical { samples: Vec<f64> },
}

impl ReferenceLaw {
    fn label(&self) -> String {
        match self {
            ReferenceLaw::Normal { mean, variance } => {
                format!("normal(mean={mean}, var={variance})")
            }
            ReferenceLaw::Uniform { lo, hi } => format!("uniform({lo}, {hi})"),
            ReferenceLaw::Empirical { samples } => format!("empirical(n={})", samples.len()),
        }
    }
}

/// Result of a KS comparison against a reference law.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KsCheck {
    pub reference: String,
    pub distance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

/// Summary statistics over one sample component.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub std_error: f64,
    pub min: f64,
    pub max: f64,
    pub ecdf_x: Vec<f64>,
    pub ecdf_y: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ks: Vec<KsCheck>,
}

impl Summary {
    /// All threshold-carrying KS checks pass (vacuously true without any).
    pub fn ks_pass(&self) -> bool {
        self.ks.iter().all(|k| k.pass.unwrap_or(true))
    }
}

/// Summarize samples; each `(law, threshold)` pair adds a KS comparison
/// (exact one-sample for analytic laws, two-sample for empirical references).
pub fn summarize(
    samples: &[f64],
    references: &[(ReferenceLaw, Option<f64>)],
) -> Result<Summary, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::EmptySamples);
    }
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let variance = if n > 1 {
        samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    let std_error = (variance / n as f64).sqrt();
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("samples are finite"));
    let (min, max) = (sorted[0], sorted[n - 1]);
    let (ecdf_x, ecdf_y) = ecdf_grid(&sorted);
    let ks = references
        .iter()
        .map(|(law, threshold)| {
            let distance = match law {
                ReferenceLaw::Normal { mean, variance } => {
                    let sd = variance.max(0.0).sqrt();
                    ks_one_sample(&sorted, |x| normal_cdf((x - mean) / sd))
                }
                ReferenceLaw::Uniform { lo, hi } => {
                    ks_one_sample(&sorted, |x| ((x - lo) / (hi - lo)).clamp(0.0, 1.0))
                }
                ReferenceLaw::Empirical { samples } => ks_two_sample(&sorted, samples),
            };
            KsCheck {
                reference: law.label(),
                distance,
                threshold: *threshold,
                pass: threshold.map(|t| distance < t),
            }
        })
        .collect();
    Ok(Summary {
        n,
        mean,
        variance,
        std_error,
        min,
        max,
        ecdf_x,
        ecdf_y,
        ks,
    })
}

/// Empirical CDF evaluated on a uniform grid over the sample range.
fn ecdf_grid(sorted: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = sorted.len();
    let (lo, hi) = (sorted[0], sorted[n - 1]);
    let mut xs = Vec::with_capacity(ECDF_GRID_LEN);
    let mut ys = Vec::with_capacity(ECDF_GRID_LEN);
    for t in 0..ECDF_GRID_LEN {
        // Pin the last grid point to the sample maximum exactly; interpolation
        // rounding must not drop the extreme sample from the final bin.
        let x = if hi <= lo {
            lo
        } else if t == ECDF_GRID_LEN - 1 {
            hi
        } else {
            lo + (hi - lo) * t as f64 / (ECDF_GRID_LEN - 1) as f64
        };
        // Count of samples <= x.
        let count = sorted.partition_point(|&s| s <= x);
        xs.push(x);
        ys.push(count as f64 / n as f64);
    }
    (xs, ys)
}

/// Exact one-sample KS distance of sorted samples against a CDF.
pub fn ks_one_sample(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(((i + 1) as f64 / n - f).abs());
        d = d.max((f - i as f64 / n).abs());
    }
    d
}

/// Two-sample KS distance (both samples need not be sorted).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    ys.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Two-sided asymptotic KS critical value `c(alpha) * sqrt((n + m) / (n m))`
/// for a two-sample test (pass `m = usize::MAX` for the one-sample limit).
pub fn ks_critical_value(alpha: f64, n: usize, m: Option<usize>) -> f64 {
    let c = (-0.5 * (alpha / 2.0).ln()).sqrt();
    match m {
        Some(m) => c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt(),
        None => c / (n as f64).sqrt(),
    }
}
