//! Dense Hermitian eigensolver, resolvent bilinear forms, and the
//! determinant-identity root finder for rank-k deformations.
//!
//! The only factorization kernel is the real symmetric Householder/QL pair in
//! [`tridiag`]; complex Hermitian matrices are routed through the `2N x 2N`
//! real embedding `[[Re H, -Im H], [Im H, Re H]]`, whose spectrum is that of
//! `H` doubled.

mod tridiag;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::matrix::HermitianMatrix;
use crate::theory::SemicircleModel;

/// Pairing tolerance for the doubled spectrum of the complex embedding.
const EMBEDDING_PAIR_TOL: f64 = 1e-9;
/// Minimum distance from a real spectral parameter to the spectrum.
const POLE_TOL: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("QL iteration failed to converge for eigenvalue {index}")]
    NoConvergence { index: usize },
    #[error("embedded spectrum failed to pair at index {index} (gap {gap:.3e})")]
    PairingFailure { index: usize, gap: f64 },
    #[error("spectral parameter {z} is within {tol:.1e} of an eigenvalue")]
    PoleNearEigenvalue { z: f64, tol: f64 },
    #[error("root search interval ({lo}, {hi}) is invalid or touches the spectrum")]
    BracketingFailure { lo: f64, hi: f64 },
    #[error("deformation eigenvalue must be nonzero")]
    SingularDeformation,
}

/// Orthonormal eigenbasis of a Hermitian matrix, matching its symmetry class.
#[derive(Debug, Clone)]
pub enum EigenBasis {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

/// Full spectral decomposition: ascending eigenvalues plus the unitary basis.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    basis: EigenBasis,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn basis(&self) -> &EigenBasis {
        &self.basis
    }

    /// Eigenvector for eigenvalue index `alpha` as a complex column.
    pub fn eigenvector(&self, alpha: usize) -> DVector<Complex64> {
        match &self.basis {
            EigenBasis::Real(u) => u.column(alpha).map(|x| Complex64::new(x, 0.0)),
            EigenBasis::Complex(u) => u.column(alpha).into_owned(),
        }
    }

    /// Projections `<u^(alpha), v>` of a direction onto every eigenvector.
    pub fn projections(&self, v: &DVector<Complex64>) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(v.len(), n, "direction length must match dimension");
        match &self.basis {
            EigenBasis::Real(u) => {
                let re: Vec<f64> = v.iter().map(|x| x.re).collect();
                let im: Vec<f64> = v.iter().map(|x| x.im).collect();
                let all_real = v.iter().all(|x| x.im == 0.0);
                (0..n)
                    .map(|alpha| {
                        let col = u.column(alpha);
                        let dot_re: f64 = col.iter().zip(&re).map(|(a, b)| a * b).sum();
                        let dot_im: f64 = if all_real {
                            0.0
                        } else {
                            col.iter().zip(&im).map(|(a, b)| a * b).sum()
                        };
                        Complex64::new(dot_re, dot_im)
                    })
                    .collect()
            }
            EigenBasis::Complex(u) => (0..n)
                .map(|alpha| {
                    let col = u.column(alpha);
                    col.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
                })
                .collect(),
        }
    }

    /// Resolvent bilinear form `<v, (H - z)^{-1} w> = sum_a <v,u_a><u_a,w> / (lambda_a - z)`.
    ///
    /// Real `z` must keep a distance of at least `1e-13` from the spectrum.
    pub fn resolvent_bilinear(
        &self,
        v: &DVector<Complex64>,
        w: &DVector<Complex64>,
        z: Complex64,
    ) -> Result<Complex64, SpectralError> {
        self.check_pole(z)?;
        let pv = self.projections(v);
        let pw = self.projections(w);
        let mut acc = Complex64::new(0.0, 0.0);
        for alpha in 0..self.dim() {
            acc += pv[alpha].conj() * pw[alpha] / (Complex64::new(self.eigenvalues[alpha], 0.0) - z);
        }
        Ok(acc)
    }

    /// Isotropic local-law residual `|G_vw(z) - m(z) <v,w>|` for unit directions.
    pub fn isotropic_residual(
        &self,
        model: &SemicircleModel,
        v: &DVector<Complex64>,
        w: &DVector<Complex64>,
        z: Complex64,
    ) -> Result<f64, SpectralError> {
        let g = self.resolvent_bilinear(v, w, z)?;
        let m = model
            .stieltjes(z)
            .map_err(|_| SpectralError::PoleNearEigenvalue { z: z.re, tol: POLE_TOL })?;
        let inner: Complex64 = v.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
        Ok((g - m * inner).norm())
    }

    fn check_pole(&self, z: Complex64) -> Result<(), SpectralError> {
        if z.im != 0.0 {
            return Ok(());
        }
        let nearest = self
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |acc, &l| acc.min((l - z.re).abs()));
        if nearest <= POLE_TOL {
            return Err(SpectralError::PoleNearEigenvalue { z: z.re, tol: POLE_TOL });
        }
        Ok(())
    }
}

fn validate_hermitian(h: &HermitianMatrix) -> Result<(), SpectralError> {
    let tol = 1e-12 * h.max_abs().max(1.0);
    let defect = h.hermitian_defect();
    if defect > tol {
        return Err(SpectralError::NotHermitian { defect, tol });
    }
    Ok(())
}

/// Column-major copy of the symmetrized real matrix.
fn real_workspace(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = vec![0.0f64; n * n];
    for j in 0..n {
        for i in 0..n {
            a[j * n + i] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }
    a
}

/// Real embedding `[[X, -Y], [Y, X]]` of `H = X + iY`, symmetrized.
fn embedded_workspace(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    let nn = 2 * n;
    let mut a = vec![0.0f64; nn * nn];
    for j in 0..n {
        for i in 0..n {
            let x = 0.5 * (m[(i, j)].re + m[(j, i)].re);
            let y = 0.5 * (m[(i, j)].im - m[(j, i)].im);
            a[j * nn + i] = x;
            a[(j + n) * nn + i + n] = x;
            a[j * nn + i + n] = y;
            a[(j + n) * nn + i] = -y;
        }
    }
    a
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eigh(h: &HermitianMatrix) -> Result<SpectralDecomposition, SpectralError> {
    validate_hermitian(h)?;
    match h {
        HermitianMatrix::Real(m) => {
            let n = m.nrows();
            let (vals, vecs) = tridiag::sym_eigen(real_workspace(m), n, true)?;
            let basis = DMatrix::from_column_slice(n, n, &vecs.expect("vectors requested"));
            Ok(SpectralDecomposition {
                eigenvalues: vals,
                basis: EigenBasis::Real(basis),
            })
        }
        HermitianMatrix::Complex(m) => {
            let n = m.nrows();
            let nn = 2 * n;
            let (vals, vecs) = tridiag::sym_eigen(embedded_workspace(m), nn, true)?;
            let vecs = vecs.expect("vectors requested");
            let scale = vals.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
            let (evals, basis) = unembed_pairs(&vals, &vecs, n, scale)?;
            Ok(SpectralDecomposition {
                eigenvalues: evals,
                basis: EigenBasis::Complex(basis),
            })
        }
    }
}

/// Eigenvalues only (ascending); skips eigenvector accumulation.
pub fn eigvalsh(h: &HermitianMatrix) -> Result<Vec<f64>, SpectralError> {
    validate_hermitian(h)?;
    match h {
        HermitianMatrix::Real(m) => {
            let (vals, _) = tridiag::sym_eigen(real_workspace(m), m.nrows(), false)?;
            Ok(vals)
        }
        HermitianMatrix::Complex(m) => {
            let n = m.nrows();
            let (vals, _) = tridiag::sym_eigen(embedded_workspace(m), 2 * n, false)?;
            let scale = vals.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
            let mut out = Vec::with_capacity(n);
            for t in 0..n {
                let gap = (vals[2 * t + 1] - vals[2 * t]).abs();
                if gap > EMBEDDING_PAIR_TOL * scale.max(1.0) {
                    return Err(SpectralError::PairingFailure { index: t, gap });
                }
                out.push(0.5 * (vals[2 * t] + vals[2 * t + 1]));
            }
            Ok(out)
        }
    }
}

/// Collapse the doubled embedded spectrum back to `N` complex eigenpairs.
///
/// Within a numerically degenerate cluster every real eigenvector maps to a
/// complex vector of the form `e^{i phi} u`; new complex directions are
/// recognized by projecting out the ones already accepted.
fn unembed_pairs(
    vals: &[f64],
    vecs: &[f64],
    n: usize,
    scale: f64,
) -> Result<(Vec<f64>, DMatrix<Complex64>), SpectralError> {
    let nn = 2 * n;
    let tol = EMBEDDING_PAIR_TOL * scale.max(1.0);
    let mut evals = Vec::with_capacity(n);
    let mut basis = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    let mut accepted = 0usize;
    // Members of the degenerate cluster currently being processed.
    let mut cluster_start = 0usize;

    for idx in 0..nn {
        if accepted == n {
            break;
        }
        if idx > 0 && (vals[idx] - vals[idx - 1]).abs() > tol {
            cluster_start = accepted;
        }
        let w = &vecs[idx * nn..(idx + 1) * nn];
        let mut u: DVector<Complex64> =
            DVector::from_fn(n, |r, _| Complex64::new(w[r], w[n + r]));
        // Project out cluster members already accepted.
        for c in cluster_start..accepted {
            let prev = basis.column(c);
            let overlap: Complex64 = prev.iter().zip(u.iter()).map(|(a, b)| a.conj() * b).sum();
            u.iter_mut()
                .zip(prev.iter())
                .for_each(|(x, p)| *x -= overlap * p);
        }
        let norm = u.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 0.5 {
            // Embedded partner of an already-accepted vector.
            continue;
        }
        u /= Complex64::new(norm, 0.0);
        basis.set_column(accepted, &u);
        evals.push(vals[idx]);
        accepted += 1;
    }
    if accepted != n {
        return Err(SpectralError::PairingFailure {
            index: accepted,
            gap: f64::NAN,
        });
    }
    Ok((evals, basis))
}

/// All roots of `mu -> det(V* G(mu) V + D^{-1})` inside `search`, refined by
/// bisection; by the determinant identity these are exactly the eigenvalues
/// of `H + V D V*` in the interval, away from the spectrum of `H`.
///
/// The interval is split at eigenvalues of `H` that fall inside it, and a
/// sign-change scan with step `grid_step` brackets the roots.
pub fn deformed_eigenvalues_via_det(
    dec: &SpectralDecomposition,
    v: &DMatrix<f64>,
    d: &[f64],
    search: (f64, f64),
    grid_step: f64,
) -> Result<Vec<f64>, SpectralError> {
    let n = dec.dim();
    let k = d.len();
    if v.nrows() != n || v.ncols() != k {
        return Err(SpectralError::DimensionMismatch {
            expected: n * k,
            got: v.nrows() * v.ncols(),
        });
    }
    if d.iter().any(|&di| di == 0.0) {
        return Err(SpectralError::SingularDeformation);
    }
    let (lo, hi) = search;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(SpectralError::BracketingFailure { lo, hi });
    }
    let endpoint_near_pole = dec
        .eigenvalues
        .iter()
        .any(|&l| (l - lo).abs() <= POLE_TOL || (l - hi).abs() <= POLE_TOL);
    if endpoint_near_pole {
        return Err(SpectralError::BracketingFailure { lo, hi });
    }

    // Projections W[alpha][j] = <u^(alpha), v_j>, computed once.
    let proj: Vec<Vec<Complex64>> = (0..k)
        .map(|j| {
            let vj: DVector<Complex64> = v.column(j).map(|x| Complex64::new(x, 0.0));
            dec.projections(&vj)
        })
        .collect();

    // det(V* G(mu) V + D^{-1}); Hermitian for real mu, so the determinant is real.
    let eval_det = |mu: f64| -> f64 {
        let mut m = DMatrix::from_element(k, k, Complex64::new(0.0, 0.0));
        for i in 0..k {
            for j in 0..k {
                let mut acc = Complex64::new(0.0, 0.0);
                for alpha in 0..n {
                    acc += proj[i][alpha].conj() * proj[j][alpha]
                        / Complex64::new(dec.eigenvalues[alpha] - mu, 0.0);
                }
                if i == j {
                    acc += Complex64::new(1.0 / d[i], 0.0);
                }
                m[(i, j)] = acc;
            }
        }
        det_lu(m)
    };

    // Split the search interval at interior poles.
    let mut cuts = vec![lo];
    for &l in &dec.eigenvalues {
        if l > lo && l < hi {
            cuts.push(l);
        }
    }
    cuts.push(hi);

    let step = if grid_step > 0.0 { grid_step } else { (hi - lo) / 1000.0 };
    let mut roots = Vec::new();
    for seg in cuts.windows(2) {
        // Stand clear of the poles bounding this segment.
        let margin = (seg[1] - seg[0]) * 1e-9 + 1e-12;
        let a = if dec.eigenvalues.iter().any(|&l| (l - seg[0]).abs() < POLE_TOL * 10.0) {
            seg[0] + margin
        } else {
            seg[0]
        };
        let b = if dec.eigenvalues.iter().any(|&l| (l - seg[1]).abs() < POLE_TOL * 10.0) {
            seg[1] - margin
        } else {
            seg[1]
        };
        if !(a < b) {
            continue;
        }
        let m = ((b - a) / step).ceil().max(1.0) as usize;
        let mut x0 = a;
        let mut f0 = eval_det(x0);
        for t in 1..=m {
            let x1 = a + (b - a) * (t as f64) / (m as f64);
            let f1 = eval_det(x1);
            if f0 == 0.0 {
                roots.push(x0);
            } else if f0 * f1 < 0.0 {
                roots.push(bisect(&eval_det, x0, x1, f0));
            }
            x0 = x1;
            f0 = f1;
        }
        if f0 == 0.0 {
            roots.push(x0);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).expect("roots are finite"));
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
    Ok(roots)
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let mut sign_lo = flo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1e-10 {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == sign_lo {
            lo = mid;
            sign_lo = fm.signum();
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Determinant of a small complex matrix by partially pivoted elimination;
/// the imaginary part is discarded (inputs here are Hermitian).
fn det_lu(mut m: DMatrix<Complex64>) -> f64 {
    let k = m.nrows();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..k {
        let mut pivot = col;
        for r in col + 1..k {
            if m[(r, col)].norm() > m[(pivot, col)].norm() {
                pivot = r;
            }
        }
        if m[(pivot, col)].norm() == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap_rows(pivot, col);
            det = -det;
        }
        let p = m[(col, col)];
        det *= p;
        for r in col + 1..k {
            let factor = m[(r, col)] / p;
            for c in col + 1..k {
                let sub = factor * m[(col, c)];
                m[(r, c)] -= sub;
            }
        }
    }
    det.re
}
