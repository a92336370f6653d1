//! Dense Hermitian matrix storage shared by the samplers and the eigensolver.
//!
//! Real symmetric (`beta = 1`) and complex Hermitian (`beta = 2`) matrices are
//! carried by one enum so the rest of the crate can stay generic over the
//! symmetry class without trait plumbing.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::spectral::SpectralError;

/// A dense Hermitian matrix of either symmetry class.
#[derive(Debug, Clone, PartialEq)]
pub enum HermitianMatrix {
    /// Real symmetric storage.
    Real(DMatrix<f64>),
    /// Complex Hermitian storage.
    Complex(DMatrix<Complex64>),
}

impl HermitianMatrix {
    /// Zero matrix of the given class and dimension.
    pub fn zeros(dim: usize, complex: bool) -> Self {
        if complex {
            HermitianMatrix::Complex(DMatrix::zeros(dim, dim))
        } else {
            HermitianMatrix::Real(DMatrix::zeros(dim, dim))
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            HermitianMatrix::Real(m) => m.nrows(),
            HermitianMatrix::Complex(m) => m.nrows(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, HermitianMatrix::Complex(_))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        match self {
            HermitianMatrix::Real(m) => m.iter().fold(0.0f64, |acc, x| acc.max(x.abs())),
            HermitianMatrix::Complex(m) => m.iter().fold(0.0f64, |acc, x| acc.max(x.norm())),
        }
    }

    /// Trace; real for Hermitian input.
    pub fn trace(&self) -> f64 {
        match self {
            HermitianMatrix::Real(m) => m.trace(),
            HermitianMatrix::Complex(m) => m.trace().re,
        }
    }

    /// Largest deviation from Hermitian symmetry, `max_ij |h_ij - conj(h_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        match self {
            HermitianMatrix::Real(m) => {
                for j in 0..n {
                    for i in 0..j {
                        worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
                    }
                }
            }
            HermitianMatrix::Complex(m) => {
                for j in 0..n {
                    for i in 0..=j {
                        worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
                    }
                }
            }
        }
        worst
    }

    /// Enforce exact Hermitian symmetry by averaging with the conjugate transpose.
    pub fn symmetrize(&mut self) {
        let n = self.dim();
        match self {
            HermitianMatrix::Real(m) => {
                for j in 0..n {
                    for i in 0..j {
                        let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                        m[(i, j)] = avg;
                        m[(j, i)] = avg;
                    }
                }
            }
            HermitianMatrix::Complex(m) => {
                for j in 0..n {
                    for i in 0..j {
                        let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
                        m[(i, j)] = avg;
                        m[(j, i)] = avg.conj();
                    }
                    m[(j, j)] = Complex64::new(m[(j, j)].re, 0.0);
                }
            }
        }
    }

    /// Quadratic form `<v, H v>` for a real direction; real by Hermitian symmetry.
    pub fn quadratic_form(&self, v: &DVector<f64>) -> Result<f64, SpectralError> {
        let n = self.dim();
        if v.len() != n {
            return Err(SpectralError::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        match self {
            HermitianMatrix::Real(m) => Ok((v.transpose() * m * v)[(0, 0)]),
            HermitianMatrix::Complex(m) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    for i in 0..n {
                        acc += v[i] * m[(i, j)] * v[j];
                    }
                }
                Ok(acc.re)
            }
        }
    }
}

impl From<DMatrix<f64>> for HermitianMatrix {
    fn from(m: DMatrix<f64>) -> Self {
        HermitianMatrix::Real(m)
    }
}

impl From<DMatrix<Complex64>> for HermitianMatrix {
    fn from(m: DMatrix<Complex64>) -> Self {
        HermitianMatrix::Complex(m)
    }
}
