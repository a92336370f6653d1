//! Outlier map and fluctuation law for finite-rank deformations: the location
//! map `theta(d) = d + 1/d`, the third/fourth moment matrices, the functionals
//! `Q`, `R`, `S`, and the predicted law of a rescaled outlier.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::theory::TheoryError;

/// Classical outlier location `theta(d) = d + 1/d` for `|d| >= 1`.
pub fn theta(d: f64) -> Result<f64, TheoryError> {
    if d.abs() < 1.0 {
        return Err(TheoryError::SubcriticalDeformation(d));
    }
    Ok(d + 1.0 / d)
}

/// Third and fourth moment matrices of the entry laws,
/// `M3_ij = N^{3/2} E(|h_ij|^2 h_ij)` and `M4_ij = N^2 E |h_ij|^4`.
///
/// The homogeneous ensembles of this crate need only one off-diagonal and one
/// diagonal value per matrix; `Full` carries explicit matrices for synthetic
/// inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentMatrices {
    Uniform {
        dim: usize,
        m3_off: Complex64,
        m3_diag: f64,
        m4_off: f64,
        m4_diag: f64,
    },
    Full {
        m3: DMatrix<Complex64>,
        m4: DMatrix<f64>,
    },
}

impl MomentMatrices {
    pub fn dim(&self) -> usize {
        match self {
            MomentMatrices::Uniform { dim, .. } => *dim,
            MomentMatrices::Full { m3, .. } => m3.nrows(),
        }
    }

    /// Materialize the uniform representation as explicit matrices.
    pub fn expand(&self) -> (DMatrix<Complex64>, DMatrix<f64>) {
        match self {
            MomentMatrices::Full { m3, m4 } => (m3.clone(), m4.clone()),
            MomentMatrices::Uniform {
                dim,
                m3_off,
                m3_diag,
                m4_off,
                m4_diag,
            } => {
                let mut m3 = DMatrix::from_element(*dim, *dim, *m3_off);
                let mut m4 = DMatrix::from_element(*dim, *dim, *m4_off);
                for i in 0..*dim {
                    m3[(i, i)] = Complex64::new(*m3_diag, 0.0);
                    m4[(i, i)] = *m4_diag;
                }
                // Hermitian closure for a complex off-diagonal value.
                for j in 0..*dim {
                    for i in 0..j {
                        m3[(j, i)] = m3[(i, j)].conj();
                    }
                }
                (m3, m4)
            }
        }
    }
}

/// The bounded functionals of the outlier law.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MomentFunctionals {
    pub q: f64,
    pub r: f64,
    pub s_re: f64,
    pub s_im: f64,
}

impl MomentFunctionals {
    pub fn s(&self) -> Complex64 {
        Complex64::new(self.s_re, self.s_im)
    }
}

/// `Q(v)`, `R(v)`, `S(v)` per their defining sums:
///
/// ```text
/// Q(v) = (2 sqrt(N))^{-1} sum_ij conj(v_i) M3_ij (|v_i|^2 + |v_j|^2) v_j
/// R(v) = N^{-1}           sum_ij (M4_ij - 4 + beta) |v_j|^4
/// S(v) = N^{-1}           sum_ij conj(v_i) M3_ij v_j
/// ```
///
/// `Q` and `S` are Hermitian quadratic forms, hence real up to rounding; the
/// full complex value of `S` is reported as a cross-check.
pub fn moment_functionals(
    moments: &MomentMatrices,
    v: &DVector<f64>,
    beta: u8,
) -> Result<MomentFunctionals, TheoryError> {
    let n = moments.dim();
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(TheoryError::NotUnitVector(norm));
    }
    let nf = n as f64;
    match moments {
        MomentMatrices::Uniform {
            m3_off,
            m3_diag,
            m4_off,
            m4_diag,
            ..
        } => {
            // Group the sums into off-diagonal and diagonal parts: with
            // s1 = sum v_i, s2 = 1, s3 = sum v_i^3, s4 = sum v_i^4,
            //   sum_{i != j} v_i v_j (v_i^2 + v_j^2) = 2 (s1 s3 - s4)
            //   sum_{i != j} v_i v_j = s1^2 - s2.
            let s1: f64 = v.iter().sum();
            let s2: f64 = v.iter().map(|x| x * x).sum();
            let s3: f64 = v.iter().map(|x| x * x * x).sum();
            let s4: f64 = v.iter().map(|x| x * x * x * x).sum();
            // Real directions make conj(v_i) M3_ij v_j + conj(v_j) M3_ji v_i
            // collapse onto Re M3 for the off-diagonal part.
            let q = (m3_off.re * 2.0 * (s1 * s3 - s4) + m3_diag * 2.0 * s4) / (2.0 * nf.sqrt());
            let s_re = (m3_off.re * (s1 * s1 - s2) + m3_diag * s2) / nf;
            let r = ((m4_off - 4.0 + beta as f64) * (nf - 1.0) * s4
                + (m4_diag - 4.0 + beta as f64) * s4)
                / nf;
            Ok(MomentFunctionals {
                q,
                r,
                s_re,
                s_im: 0.0,
            })
        }
        MomentMatrices::Full { m3, m4 } => {
            let mut q = Complex64::new(0.0, 0.0);
            let mut s = Complex64::new(0.0, 0.0);
            let mut r = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let vij = v[i] * v[j];
                    q += m3[(i, j)] * (vij * (v[i] * v[i] + v[j] * v[j]));
                    s += m3[(i, j)] * vij;
                    r += (m4[(i, j)] - 4.0 + beta as f64) * v[j].powi(4);
                }
            }
            Ok(MomentFunctionals {
                q: (q / (2.0 * nf.sqrt())).re,
                r: r / nf,
                s_re: (s / nf).re,
                s_im: (s / nf).im,
            })
        }
    }
}

/// Predicted fluctuation law of a rescaled outlier,
/// `x = N^{1/2} (|d| - 1)^{-1/2} (mu_{alpha(i)} - theta(d)) ~ Pi + Upsilon`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OutlierLaw {
    pub d: f64,
    pub beta: u8,
    /// `(|d| + 1)(|d| - 1)^{1/2}`.
    pub pi_prefactor: f64,
    /// `pi_prefactor * S(v) / d^4`, the third-moment mean shift.
    pub pi_mean_shift: f64,
    /// Variance of the independent Gaussian component `Upsilon`.
    pub upsilon_variance: f64,
}

impl OutlierLaw {
    /// Mean and variance of `Pi + Upsilon` under the CLT reference
    /// `N^{1/2} <v, H v> ~ N(0, 2/beta)` (delocalized directions).
    pub fn asymptotic_normal(&self) -> (f64, f64) {
        let var_pi = self.pi_prefactor * self.pi_prefactor * (2.0 / self.beta as f64)
            / self.d.powi(4);
        (self.pi_mean_shift, var_pi + self.upsilon_variance)
    }
}

/// Build the outlier law for deformation eigenvalue `d` (with `|d| > 1`) and
/// eigenvector `v`.
pub fn outlier_law(
    d: f64,
    v: &DVector<f64>,
    moments: &MomentMatrices,
    beta: u8,
) -> Result<OutlierLaw, TheoryError> {
    if d.abs() <= 1.0 {
        return Err(TheoryError::SubcriticalDeformation(d));
    }
    let f = moment_functionals(moments, v, beta)?;
    let abs_d = d.abs();
    let pi_prefactor = (abs_d + 1.0) * (abs_d - 1.0).sqrt();
    let pi_mean_shift = pi_prefactor * f.s_re / d.powi(4);
    let upsilon_variance = 2.0 * (abs_d + 1.0) / (beta as f64 * d.powi(4))
        + (abs_d + 1.0).powi(2) * (abs_d - 1.0) * (4.0 * f.q / d.powi(5) + f.r / d.powi(6));
    Ok(OutlierLaw {
        d,
        beta,
        pi_prefactor,
        pi_mean_shift,
        upsilon_variance,
    })
}

/// One draw of the predicted outlier fluctuation `Pi + Upsilon`:
/// `hv_sample` is a draw of `N^{1/2} <v, H v>` and `rng_draw` a standard
/// normal. A negative `upsilon_variance` (possible outside the law's
/// validity range) is clamped to zero.
pub fn sample_predicted_outlier(law: &OutlierLaw, hv_sample: f64, rng_draw: f64) -> f64 {
    law.pi_prefactor * hv_sample / (law.d * law.d)
        + law.pi_mean_shift
        + law.upsilon_variance.max(0.0).sqrt() * rng_draw
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit(n: usize, f: impl Fn(usize) -> f64) -> DVector<f64> {
        let v = DVector::from_fn(n, |i, _| f(i));
        let norm = v.norm();
        v / norm
    }

    #[test]
    fn theta_values() {
        assert_relative_eq!(theta(1.0).unwrap(), 2.0);
        assert_relative_eq!(theta(2.0).unwrap(), 2.5);
        assert_relative_eq!(theta(-2.0).unwrap(), -2.5);
        assert!(theta(0.5).is_err());
    }

    #[test]
    fn theta_edge_expansion() {
        // theta(d) - 2 and (d - 1)^2 agree within a factor of 4 on [1.01, 2].
        for i in 0..100 {
            let d = 1.01 + 0.01 * i as f64;
            let lhs = theta(d).unwrap() - 2.0;
            let rhs = (d - 1.0) * (d - 1.0);
            let ratio = lhs / rhs;
            assert!(ratio > 0.25 && ratio < 4.0, "d={d} ratio={ratio}");
        }
    }

    #[test]
    fn goe_moments_give_zero_q_s_and_small_r() {
        let n = 64;
        let m = MomentMatrices::Uniform {
            dim: n,
            m3_off: Complex64::new(0.0, 0.0),
            m3_diag: 0.0,
            m4_off: 3.0,
            m4_diag: 12.0,
        };
        let v = unit(n, |i| (i as f64 + 1.0).sin());
        let f = moment_functionals(&m, &v, 1).unwrap();
        assert_eq!(f.q, 0.0);
        assert_eq!(f.s(), Complex64::new(0.0, 0.0));
        assert!(f.r > 0.0 && f.r <= 9.0 / n as f64 + 1e-12);
    }

    #[test]
    fn uniform_direction_s_is_exact() {
        let n = 50;
        let m3 = 0.7;
        let m = MomentMatrices::Uniform {
            dim: n,
            m3_off: Complex64::new(m3, 0.0),
            m3_diag: m3,
            m4_off: 2.0,
            m4_diag: 2.0,
        };
        let v = unit(n, |_| 1.0);
        let f = moment_functionals(&m, &v, 1).unwrap();
        assert_relative_eq!(f.s_re, m3, epsilon = 1e-12);
    }

    #[test]
    fn spike_plus_flat_q_value() {
        // v = (2^{-1/2}, (2N-2)^{-1/2}, ...) with uniform M3 = m3:
        // Q = m3 (s1 s3 - s4 + s4) / sqrt(N) -> close to 2^{-3/2} m3 at
        // moderate N (exact limit 2^{-2} m3; convergence rate N^{-1/2}).
        let n = 200;
        let m3 = 1.0;
        let m = MomentMatrices::Uniform {
            dim: n,
            m3_off: Complex64::new(m3, 0.0),
            m3_diag: m3,
            m4_off: 2.0,
            m4_diag: 2.0,
        };
        let mut raw = vec![(2.0 * n as f64 - 2.0).powf(-0.5); n];
        raw[0] = 2.0f64.powf(-0.5);
        let v = DVector::from_vec(raw);
        let f = moment_functionals(&m, &v, 1).unwrap();
        let expected = 2.0f64.powf(-1.5) * m3;
        assert!(
            (f.q - expected).abs() <= 1.5 * (n as f64).powf(-0.5),
            "q={} expected~{}",
            f.q,
            expected
        );
    }

    #[test]
    fn rejects_non_unit_direction() {
        let m = MomentMatrices::Uniform {
            dim: 4,
            m3_off: Complex64::new(0.0, 0.0),
            m3_diag: 0.0,
            m4_off: 3.0,
            m4_diag: 12.0,
        };
        let v = DVector::from_vec(vec![1.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            moment_functionals(&m, &v, 1),
            Err(TheoryError::NotUnitVector(_))
        ));
    }

    // Idealized moments with M4 - 4 + beta = 0 everywhere, so Q = R = S = 0
    // exactly and the total variance collapses to the closed form.
    fn goe_law(d: f64) -> OutlierLaw {
        let n = 100;
        let m = MomentMatrices::Uniform {
            dim: n,
            m3_off: Complex64::new(0.0, 0.0),
            m3_diag: 0.0,
            m4_off: 3.0,
            m4_diag: 3.0,
        };
        let v = unit(n, |_| 1.0);
        outlier_law(d, &v, &m, 1).unwrap()
    }

    #[test]
    fn variance_collapse_identity() {
        // 2(|d|+1)^2(|d|-1)/(beta d^4) + 2(|d|+1)/(beta d^4) = 2(|d|+1)/(beta d^2).
        for &(d, beta) in &[(2.0f64, 1u8), (1.3, 2), (-1.7, 1), (2.9, 2)] {
            let b = beta as f64;
            let lhs = 2.0 * (d.abs() + 1.0).powi(2) * (d.abs() - 1.0) / (b * d.powi(4))
                + 2.0 * (d.abs() + 1.0) / (b * d.powi(4));
            let rhs = 2.0 * (d.abs() + 1.0) / (b * d * d);
            assert!((lhs - rhs).abs() <= 1e-12);
        }
    }

    #[test]
    fn total_variance_goe_d2() {
        let law = goe_law(2.0);
        let (mean, var) = law.asymptotic_normal();
        assert_relative_eq!(mean, 0.0, epsilon = 1e-12);
        assert_relative_eq!(var, 1.5, epsilon = 1e-10);
    }

    #[test]
    fn total_variance_near_bulk_limit() {
        let law = goe_law(1.0 + 1e-9);
        let (_, var) = law.asymptotic_normal();
        assert_relative_eq!(var, 4.0, epsilon = 1e-6);
    }

    #[test]
    fn gue_delocalized_variance() {
        let n = 100;
        let m = MomentMatrices::Uniform {
            dim: n,
            m3_off: Complex64::new(0.0, 0.0),
            m3_diag: 0.0,
            m4_off: 2.0,
            m4_diag: 2.0,
        };
        let v = unit(n, |_| 1.0);
        let law = outlier_law(2.0, &v, &m, 2).unwrap();
        let (_, var) = law.asymptotic_normal();
        assert_relative_eq!(var, 0.75, epsilon = 1e-10);
    }

    #[test]
    fn predicted_sample_at_zero_inputs() {
        let law = goe_law(2.0);
        assert_relative_eq!(
            sample_predicted_outlier(&law, 0.0, 0.0),
            law.pi_mean_shift,
            epsilon = 1e-15
        );
    }

    #[test]
    fn outlier_law_rejects_subcritical() {
        let m = MomentMatrices::Uniform {
            dim: 4,
            m3_off: Complex64::new(0.0, 0.0),
            m3_diag: 0.0,
            m4_off: 3.0,
            m4_diag: 12.0,
        };
        let v = unit(4, |_| 1.0);
        assert!(outlier_law(0.9, &v, &m, 1).is_err());
    }
}
