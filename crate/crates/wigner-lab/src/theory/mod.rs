//! Closed-form quantities of the semicircle law: density, Stieltjes
//! transform, classical eigenvalue locations, edge distance, and the local-law
//! control parameters.

mod outliers;

pub use outliers::{
    moment_functionals, outlier_law, sample_predicted_outlier, theta, MomentFunctionals,
    MomentMatrices, OutlierLaw,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("real spectral parameter {0} lies inside the support [-2, 2]")]
    InsideSupport(f64),
    #[error("spectral parameter must satisfy Im z > 0, got {0}")]
    NonPositiveImaginaryPart(f64),
    #[error("deformation eigenvalue {0} lies inside (-1, 1)")]
    SubcriticalDeformation(f64),
    #[error("spectral window must satisfy Sigma >= 3, got {0}")]
    SigmaTooSmall(f64),
    #[error("direction must be a unit vector, got norm {0}")]
    NotUnitVector(f64),
    #[error("dimension must be positive")]
    EmptyDimension,
}

/// Evaluators for the semicircle law and its Stieltjes transform.
///
/// `sigma` is the fixed spectral window (at least 3); `tol` bounds the
/// root-refinement error of the classical-location solver.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SemicircleModel {
    pub sigma: f64,
    pub tol: f64,
}

impl Default for SemicircleModel {
    fn default() -> Self {
        SemicircleModel {
            sigma: 3.0,
            tol: 1e-12,
        }
    }
}

/// Local-law control parameters at a spectral point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ControlParams {
    pub dim: usize,
    pub z_re: f64,
    pub z_im: f64,
    /// `Psi = sqrt(Im m / (N eta)) + 1/(N eta)`.
    pub psi_value: f64,
    /// `Phi = Im m + 1/(N eta)`.
    pub phi_value: f64,
}

impl SemicircleModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_sigma(sigma: f64) -> Result<Self, TheoryError> {
        if sigma < 3.0 {
            return Err(TheoryError::SigmaTooSmall(sigma));
        }
        Ok(SemicircleModel {
            sigma,
            ..Self::default()
        })
    }

    /// Semicircle density `rho(xi) = sqrt((4 - xi^2)_+) / (2 pi)`.
    pub fn density(&self, xi: f64) -> f64 {
        let t = 4.0 - xi * xi;
        if t <= 0.0 {
            0.0
        } else {
            t.sqrt() / (2.0 * std::f64::consts::PI)
        }
    }

    /// Cumulative distribution of the semicircle law.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= -2.0 {
            return 0.0;
        }
        if x >= 2.0 {
            return 1.0;
        }
        let pi = std::f64::consts::PI;
        0.5 + (x * (4.0 - x * x).sqrt() + 4.0 * (x / 2.0).asin()) / (4.0 * pi)
    }

    /// Stieltjes transform `m(z)`: the root of `m^2 + z m + 1 = 0` with
    /// `Im m > 0` for `Im z > 0` (conjugate branch below the axis), and the
    /// root in `[-1, 1] \ {0}` for real `|z| > 2`.
    pub fn stieltjes(&self, z: Complex64) -> Result<Complex64, TheoryError> {
        if z.im == 0.0 && z.re.abs() <= 2.0 {
            return Err(TheoryError::InsideSupport(z.re));
        }
        // The two roots have product 1; the physical branch is the one inside
        // the unit disc, and dividing avoids cancellation.
        let s = (z * z - Complex64::new(4.0, 0.0)).sqrt();
        let r1 = (-z + s) * 0.5;
        let r2 = (-z - s) * 0.5;
        let big = if r1.norm() >= r2.norm() { r1 } else { r2 };
        Ok(big.inv())
    }

    /// Stieltjes transform on the real axis outside the support.
    pub fn stieltjes_real(&self, x: f64) -> Result<f64, TheoryError> {
        Ok(self.stieltjes(Complex64::new(x, 0.0))?.re)
    }

    /// Derivative `m'(x) = m(x)^2 / (1 - m(x)^2)` for real `|x| > 2`.
    pub fn stieltjes_derivative(&self, x: f64) -> Result<f64, TheoryError> {
        let m = self.stieltjes_real(x)?;
        Ok(m * m / (1.0 - m * m))
    }

    /// Distance from `E` to the spectral edges: `kappa_E = ||E| - 2|`.
    pub fn kappa(&self, e: f64) -> f64 {
        (e.abs() - 2.0).abs()
    }

    /// Classical locations: `gamma_alpha` solves `N * F(gamma_alpha) = alpha`
    /// for `alpha = 1..=N`, strictly increasing with `gamma_N = 2`.
    pub fn classical_locations(&self, n: usize) -> Result<Vec<f64>, TheoryError> {
        if n == 0 {
            return Err(TheoryError::EmptyDimension);
        }
        let mut out = Vec::with_capacity(n);
        for alpha in 1..=n {
            out.push(self.quantile(alpha as f64 / n as f64));
        }
        Ok(out)
    }

    /// Semicircle quantile by bisection plus a Newton polish.
    fn quantile(&self, p: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&p));
        if p >= 1.0 {
            return 2.0;
        }
        if p <= 0.0 {
            return -2.0;
        }
        let (mut lo, mut hi) = (-2.0f64, 2.0f64);
        while hi - lo > self.tol.max(1e-13) {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        // Two Newton steps sharpen the residual to rounding level.
        for _ in 0..2 {
            let rho = self.density(x);
            if rho > 0.0 {
                x -= (self.cdf(x) - p) / rho;
                x = x.clamp(-2.0, 2.0);
            }
        }
        x
    }

    /// Control parameters `Psi`, `Phi` at `z` with `Im z > 0`.
    pub fn control_params(&self, z: Complex64, n: usize) -> Result<ControlParams, TheoryError> {
        if z.im <= 0.0 {
            return Err(TheoryError::NonPositiveImaginaryPart(z.im));
        }
        if n == 0 {
            return Err(TheoryError::EmptyDimension);
        }
        let im_m = self.stieltjes(z)?.im;
        let n_eta = n as f64 * z.im;
        Ok(ControlParams {
            dim: n,
            z_re: z.re,
            z_im: z.im,
            psi_value: (im_m / n_eta).sqrt() + 1.0 / n_eta,
            phi_value: im_m + 1.0 / n_eta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn density_values() {
        let model = SemicircleModel::new();
        assert_relative_eq!(model.density(0.0), 1.0 / std::f64::consts::PI, epsilon = 1e-15);
        assert_eq!(model.density(2.0), 0.0);
        assert_eq!(model.density(-2.0), 0.0);
        assert_eq!(model.density(3.0), 0.0);
    }

    #[test]
    fn density_integrates_to_one() {
        // Midpoint rule on the compact support.
        let model = SemicircleModel::new();
        let steps = 200_000;
        let h = 4.0 / steps as f64;
        let total: f64 = (0..steps)
            .map(|i| model.density(-2.0 + (i as f64 + 0.5) * h) * h)
            .sum();
        // Midpoint rule loses accuracy at the square-root edges.
        assert_relative_eq!(total, 1.0, epsilon = 1e-7);
    }

    #[test]
    fn stieltjes_at_real_points() {
        let model = SemicircleModel::new();
        assert_relative_eq!(model.stieltjes_real(2.5).unwrap(), -0.5, epsilon = 1e-14);
        assert_relative_eq!(model.stieltjes_real(-2.5).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn stieltjes_inside_support_errors() {
        let model = SemicircleModel::new();
        assert!(matches!(
            model.stieltjes_real(1.5),
            Err(TheoryError::InsideSupport(_))
        ));
        assert!(model.stieltjes_real(2.0).is_err());
    }

    #[test]
    fn stieltjes_at_i() {
        // m(i) = i (sqrt(5) - 1) / 2.
        let model = SemicircleModel::new();
        let m = model.stieltjes(Complex64::new(0.0, 1.0)).unwrap();
        assert_relative_eq!(m.re, 0.0, epsilon = 1e-14);
        assert_relative_eq!(m.im, (5.0f64.sqrt() - 1.0) / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn stieltjes_self_consistency_and_symmetry() {
        let model = SemicircleModel::new();
        let zs = [
            Complex64::new(0.3, 0.01),
            Complex64::new(-1.7, 0.5),
            Complex64::new(2.9, 1e-3),
            Complex64::new(0.0, 2.0),
        ];
        for &z in &zs {
            let m = model.stieltjes(z).unwrap();
            assert!((m + m.inv() + z).norm() <= 1e-12);
            assert!(m.im > 0.0);
            let modd = model.stieltjes(-z).unwrap();
            assert!((modd + m).norm() <= 1e-13);
            let mconj = model.stieltjes(z.conj()).unwrap();
            assert!((mconj - m.conj()).norm() <= 1e-13);
        }
    }

    #[test]
    fn derivative_closed_form() {
        let model = SemicircleModel::new();
        assert_relative_eq!(
            model.stieltjes_derivative(2.5).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            model.stieltjes_derivative(-2.5).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-14
        );
        assert!(model.stieltjes_derivative(1.0).is_err());
    }

    #[test]
    fn kappa_values() {
        let model = SemicircleModel::new();
        assert_eq!(model.kappa(2.0), 0.0);
        assert_eq!(model.kappa(0.0), 2.0);
        assert_eq!(model.kappa(-2.5), 0.5);
    }

    #[test]
    fn classical_locations_small() {
        let model = SemicircleModel::new();
        assert_relative_eq!(model.classical_locations(1).unwrap()[0], 2.0, epsilon = 1e-12);
        let g2 = model.classical_locations(2).unwrap();
        assert_relative_eq!(g2[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(g2[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn classical_locations_residuals() {
        let model = SemicircleModel::new();
        let n = 100;
        let g = model.classical_locations(n).unwrap();
        for alpha in 1..=n {
            let residual = (n as f64 * model.cdf(g[alpha - 1]) - alpha as f64).abs();
            assert!(residual < 1e-10, "alpha={alpha} residual={residual}");
        }
        for w in g.windows(2) {
            assert!(w[0] < w[1]);
        }
        // Symmetry gamma_alpha = -gamma_{N + 1 - alpha} with the CDF convention
        // shifted by one mass unit: compare residuals instead at alpha=25.
        let residual = (n as f64 * model.cdf(g[24]) - 25.0).abs();
        assert!(residual < 1e-10);
    }

    #[test]
    fn control_params_direct_substitution() {
        // Im m = 0.25 and N eta = 100 give psi = sqrt(0.0025) + 0.01 = 0.06.
        let model = SemicircleModel::new();
        let n = 80;
        let eta = 1.25; // N eta = 100
        // Locate E > 0 with Im m(E + i eta) = 0.25 by bisection.
        let (mut lo, mut hi) = (0.0f64, 20.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if model.stieltjes(Complex64::new(mid, eta)).unwrap().im > 0.25 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let z = Complex64::new(0.5 * (lo + hi), eta);
        let cp = model.control_params(z, n).unwrap();
        assert_relative_eq!(cp.psi_value, 0.06, epsilon = 1e-10);
        assert_relative_eq!(cp.phi_value, 0.26, epsilon = 1e-10);
        assert!(model.control_params(Complex64::new(0.5, 0.0), 10).is_err());
    }
}
