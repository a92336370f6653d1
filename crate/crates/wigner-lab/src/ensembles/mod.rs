//! Seeded Wigner-matrix samplers for both symmetry classes, analytic moment
//! matrices of the entry laws, and rank-k deformation builders.
//!
//! Entry normalization: off-diagonal variance `1/N`; diagonal variance `2/N`
//! for the real symmetric class and `1/N` for the complex Hermitian class;
//! complex off-diagonal entries satisfy `E h^2 = 0`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::HermitianMatrix;
use crate::theory::MomentMatrices;

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("matrix dimension must be positive")]
    EmptyDimension,
    #[error("deformation eigenvalues must be nonzero")]
    ZeroDeformation,
    #[error("deformation eigenvalues must be nondecreasing")]
    UnsortedDeformation,
    #[error("rank {k} exceeds dimension {n}")]
    RankTooLarge { k: usize, n: usize },
    #[error("explicit basis has wrong shape: expected {n} x {k}")]
    BadExplicitBasis { n: usize, k: usize },
    #[error("basis is not orthonormal: defect {0:.3e}")]
    NotOrthonormal(f64),
    #[error("dimension mismatch between matrix ({h}) and basis ({v})")]
    DimensionMismatch { h: usize, v: usize },
}

/// Symmetry class of the ensemble; `beta = 1` real symmetric, `beta = 2`
/// complex Hermitian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryClass {
    RealSymmetric,
    ComplexHermitian,
}

impl SymmetryClass {
    pub fn beta(self) -> u8 {
        match self {
            SymmetryClass::RealSymmetric => 1,
            SymmetryClass::ComplexHermitian => 2,
        }
    }
}

/// Entry-distribution family for the rescaled (unit-variance) entry laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "name")]
pub enum EntryFamily {
    Gaussian,
    Rademacher,
    /// Two-point law with mean 0, variance 1, and third moment `third_moment`:
    /// value `a` with probability `p`, value `-b` with probability `1 - p`,
    /// where `a = (t + sqrt(t^2 + 4))/2`, `b = a - t`, `p = b/(a + b)`.
    SkewedTwoPoint { third_moment: f64 },
    Uniform,
}

impl EntryFamily {
    /// Whether the rescaled entry law has vanishing third moment.
    pub fn has_vanishing_third_moment(&self) -> bool {
        match self {
            EntryFamily::SkewedTwoPoint { third_moment } => *third_moment == 0.0,
            _ => true,
        }
    }
}

/// Ensemble description: symmetry class, entry family, and dimension.
///
/// `subexponential_theta` is informational metadata (all supported families
/// are bounded or Gaussian, so subexponential decay is automatic).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub class: SymmetryClass,
    pub family: EntryFamily,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subexponential_theta: Option<f64>,
}

impl EnsembleSpec {
    pub fn new(class: SymmetryClass, family: EntryFamily, dim: usize) -> Self {
        EnsembleSpec {
            class,
            family,
            dim,
            subexponential_theta: None,
        }
    }

    pub fn goe(dim: usize) -> Self {
        Self::new(SymmetryClass::RealSymmetric, EntryFamily::Gaussian, dim)
    }

    pub fn gue(dim: usize) -> Self {
        Self::new(SymmetryClass::ComplexHermitian, EntryFamily::Gaussian, dim)
    }

    pub fn beta(&self) -> u8 {
        self.class.beta()
    }
}

/// Derive the RNG seed for trial `trial` from a master seed (splitmix64 over
/// the pair), so trials are independent of worker scheduling.
pub fn mix_seed(master_seed: u64, trial: u64) -> u64 {
    let mut x = master_seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seeded RNG used everywhere in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One draw of the rescaled (mean 0, variance 1) entry law.
fn draw_unit<R: Rng>(family: EntryFamily, rng: &mut R) -> f64 {
    match family {
        EntryFamily::Gaussian => StandardNormal.sample(rng),
        EntryFamily::Rademacher => {
            if rng.random::<bool>() {
                1.0
            } else {
                -1.0
            }
        }
        EntryFamily::SkewedTwoPoint { third_moment: t } => {
            let (a, b, p) = skewed_two_point_params(t);
            if rng.random::<f64>() < p {
                a
            } else {
                -b
            }
        }
        EntryFamily::Uniform => {
            let s = 3.0f64.sqrt();
            rng.random_range(-s..s)
        }
    }
}

/// Closed-form parameters of the minimal-support law with mean 0, variance 1,
/// third moment `t`.
pub fn skewed_two_point_params(t: f64) -> (f64, f64, f64) {
    let a = (t + (t * t + 4.0).sqrt()) / 2.0;
    let b = a - t;
    let p = b / (a + b);
    (a, b, p)
}

/// Fourth moment of the rescaled entry law.
fn unit_fourth_moment(family: EntryFamily) -> f64 {
    match family {
        EntryFamily::Gaussian => 3.0,
        EntryFamily::Rademacher => 1.0,
        EntryFamily::SkewedTwoPoint { third_moment: t } => 1.0 + t * t,
        EntryFamily::Uniform => 9.0 / 5.0,
    }
}

/// Third moment of the rescaled entry law.
fn unit_third_moment(family: EntryFamily) -> f64 {
    match family {
        EntryFamily::SkewedTwoPoint { third_moment: t } => t,
        _ => 0.0,
    }
}

/// Sample a Wigner matrix; deterministic given `(spec, seed)`. Entries are
/// filled in a fixed upper-triangle order and mirrored, so the result is
/// exactly Hermitian.
pub fn sample_wigner(spec: &EnsembleSpec, seed: u64) -> HermitianMatrix {
    let n = spec.dim;
    let mut rng = rng_from_seed(seed);
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    match spec.class {
        SymmetryClass::RealSymmetric => {
            let mut m = DMatrix::<f64>::zeros(n, n);
            let diag_scale = (2.0 / n as f64).sqrt();
            for i in 0..n {
                for j in i..n {
                    let x = draw_unit(spec.family, &mut rng);
                    let h = if i == j {
                        diag_scale * x
                    } else {
                        inv_sqrt_n * x
                    };
                    m[(i, j)] = h;
                    m[(j, i)] = h;
                }
            }
            HermitianMatrix::Real(m)
        }
        SymmetryClass::ComplexHermitian => {
            let mut m = DMatrix::<Complex64>::zeros(n, n);
            let part_scale = 1.0 / (2.0 * n as f64).sqrt();
            for i in 0..n {
                for j in i..n {
                    if i == j {
                        let x = draw_unit(spec.family, &mut rng);
                        m[(i, i)] = Complex64::new(inv_sqrt_n * x, 0.0);
                    } else {
                        let re = draw_unit(spec.family, &mut rng);
                        let im = draw_unit(spec.family, &mut rng);
                        let h = Complex64::new(part_scale * re, part_scale * im);
                        m[(i, j)] = h;
                        m[(j, i)] = h.conj();
                    }
                }
            }
            HermitianMatrix::Complex(m)
        }
    }
}

/// Analytic moment matrices `M3`, `M4` of the spec's entry laws.
pub fn moment_matrices_of(spec: &EnsembleSpec) -> MomentMatrices {
    let t = unit_third_moment(spec.family);
    let m4 = unit_fourth_moment(spec.family);
    match spec.class {
        SymmetryClass::RealSymmetric => MomentMatrices::Uniform {
            dim: spec.dim,
            // off-diagonal h = X / sqrt(N): M3 = E X^3, M4 = E X^4
            m3_off: Complex64::new(t, 0.0),
            // diagonal h = sqrt(2/N) X: M3 = 2^{3/2} E X^3, M4 = 4 E X^4
            m3_diag: 2.0f64.powf(1.5) * t,
            m4_off: m4,
            m4_diag: 4.0 * m4,
        },
        SymmetryClass::ComplexHermitian => {
            // off-diagonal h = (X1 + i X2) / sqrt(2N):
            //   E |h|^2 h = t (1 + i) / (2N)^{3/2} => M3 = t (1 + i) / 2^{3/2}
            //   E |h|^4 = (2 E X^4 + 2) / (4 N^2)  => M4 = (E X^4 + 1) / 2
            let c = t / 2.0f64.powf(1.5);
            MomentMatrices::Uniform {
                dim: spec.dim,
                m3_off: Complex64::new(c, c),
                m3_diag: t,
                m4_off: (m4 + 1.0) / 2.0,
                m4_diag: m4,
            }
        }
    }
}

/// Recipe for the orthonormal deformation basis `V`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "name")]
pub enum BasisRecipe {
    /// Columns `e_1, ..., e_k`.
    StandardBasis,
    /// First column `N^{-1/2} (1, ..., 1)`, completed deterministically.
    UniformVector,
    /// Seeded Gaussian columns, Gram-Schmidt orthonormalized.
    RandomOrthonormal,
    /// First column `(2^{-1/2}, (2N-2)^{-1/2}, ...)`, completed
    /// deterministically.
    SpikePlusFlat,
    /// Explicit column list (each inner vector one column of length `N`).
    Explicit { columns: Vec<Vec<f64>> },
}

/// A rank-k deformation `V D V*` with eigenvalues `d` and basis recipe for `V`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationSpec {
    /// Nondecreasing, nonzero deformation eigenvalues `d_1 <= ... <= d_k`.
    pub eigenvalues: Vec<f64>,
    pub basis: BasisRecipe,
}

impl DeformationSpec {
    pub fn new(mut eigenvalues: Vec<f64>, basis: BasisRecipe) -> Result<Self, EnsembleError> {
        if eigenvalues.iter().any(|&d| d == 0.0) {
            return Err(EnsembleError::ZeroDeformation);
        }
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite deformation"));
        Ok(DeformationSpec { eigenvalues, basis })
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Number of outliers to the left of the bulk (`d_i < -1`).
    pub fn k_minus(&self) -> usize {
        self.eigenvalues.iter().filter(|&&d| d < -1.0).count()
    }

    /// Number of outliers to the right of the bulk (`d_i > 1`).
    pub fn k_plus(&self) -> usize {
        self.eigenvalues.iter().filter(|&&d| d > 1.0).count()
    }

    /// Indices (0-based into `eigenvalues`) of the outlier set `O`.
    pub fn outlier_indices(&self) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| self.eigenvalues[i].abs() > 1.0)
            .collect()
    }

    /// The eigenvalue index `alpha(i)` (0-based) of outlier `i` in the
    /// deformed spectrum of dimension `n`.
    pub fn outlier_eigenvalue_index(&self, i: usize, n: usize) -> usize {
        let k = self.rank();
        debug_assert!(self.eigenvalues[i].abs() > 1.0);
        if self.eigenvalues[i] > 1.0 {
            // 1-based alpha(i) = N - k + i  (i counted 1-based from the left)
            n - k + i
        } else {
            i
        }
    }

    fn validate_rank(&self, n: usize) -> Result<(), EnsembleError> {
        if self.rank() > n {
            return Err(EnsembleError::RankTooLarge { k: self.rank(), n });
        }
        Ok(())
    }
}

const ORTHONORMALITY_TOL: f64 = 1e-12;

/// Build the orthonormal basis `V` (N x k) for a recipe; `seed` feeds only the
/// `RandomOrthonormal` recipe.
pub fn build_basis(
    recipe: &BasisRecipe,
    n: usize,
    k: usize,
    seed: u64,
) -> Result<DMatrix<f64>, EnsembleError> {
    if n == 0 {
        return Err(EnsembleError::EmptyDimension);
    }
    if k > n {
        return Err(EnsembleError::RankTooLarge { k, n });
    }
    let mut v = DMatrix::<f64>::zeros(n, k);
    match recipe {
        BasisRecipe::StandardBasis => {
            for j in 0..k {
                v[(j, j)] = 1.0;
            }
        }
        BasisRecipe::UniformVector => {
            let lead = DVector::from_element(n, (n as f64).powf(-0.5));
            fill_with_completion(&mut v, lead)?;
        }
        BasisRecipe::SpikePlusFlat => {
            let flat = if n > 1 {
                (2.0 * n as f64 - 2.0).powf(-0.5)
            } else {
                0.0
            };
            let mut lead = DVector::from_element(n, flat);
            lead[0] = 2.0f64.powf(-0.5);
            if n == 1 {
                lead[0] = 1.0;
            }
            fill_with_completion(&mut v, lead)?;
        }
        BasisRecipe::RandomOrthonormal => {
            let mut rng = rng_from_seed(seed);
            for j in 0..k {
                for i in 0..n {
                    v[(i, j)] = StandardNormal.sample(&mut rng);
                }
            }
            gram_schmidt(&mut v)?;
        }
        BasisRecipe::Explicit { columns } => {
            if columns.len() != k || columns.iter().any(|c| c.len() != n) {
                return Err(EnsembleError::BadExplicitBasis { n, k });
            }
            for (j, c) in columns.iter().enumerate() {
                for (i, &x) in c.iter().enumerate() {
                    v[(i, j)] = x;
                }
            }
            let defect = orthonormality_defect(&v);
            if defect > ORTHONORMALITY_TOL {
                return Err(EnsembleError::NotOrthonormal(defect));
            }
        }
    }
    debug_assert!(orthonormality_defect(&v) <= ORTHONORMALITY_TOL);
    Ok(v)
}

/// First column fixed, remaining columns from Gram-Schmidt on standard basis
/// vectors (deterministic completion).
fn fill_with_completion(v: &mut DMatrix<f64>, lead: DVector<f64>) -> Result<(), EnsembleError> {
    let (n, k) = (v.nrows(), v.ncols());
    v.set_column(0, &lead);
    let mut next_basis = 0usize;
    for j in 1..k {
        // Seed column j with the next standard basis vector not already
        // exhausted by projection.
        loop {
            if next_basis >= n {
                return Err(EnsembleError::NotOrthonormal(1.0));
            }
            let mut cand = DVector::zeros(n);
            cand[next_basis] = 1.0;
            next_basis += 1;
            for p in 0..j {
                let prev = v.column(p);
                let overlap = prev.dot(&cand);
                cand -= prev * overlap;
            }
            let norm = cand.norm();
            if norm > 1e-6 {
                cand /= norm;
                // One re-orthogonalization pass tightens the defect.
                for p in 0..j {
                    let prev = v.column(p);
                    let overlap = prev.dot(&cand);
                    cand -= prev * overlap;
                }
                cand /= cand.norm();
                v.set_column(j, &cand);
                break;
            }
        }
    }
    Ok(())
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
fn gram_schmidt(v: &mut DMatrix<f64>) -> Result<(), EnsembleError> {
    let k = v.ncols();
    for j in 0..k {
        for _pass in 0..2 {
            for p in 0..j {
                let overlap = v.column(p).dot(&v.column(j));
                let prev = v.column(p).into_owned();
                let mut col = v.column_mut(j);
                col.axpy(-overlap, &prev, 1.0);
            }
        }
        let norm = v.column(j).norm();
        if norm < 1e-8 {
            return Err(EnsembleError::NotOrthonormal(1.0));
        }
        v.column_mut(j).scale_mut(1.0 / norm);
    }
    Ok(())
}

/// `max |V^T V - I|`.
pub fn orthonormality_defect(v: &DMatrix<f64>) -> f64 {
    let k = v.ncols();
    let gram = v.transpose() * v;
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - expect).abs());
        }
    }
    worst
}

/// Deformed matrix `H + V D V*`, symmetrized after accumulation.
pub fn deform(
    h: &HermitianMatrix,
    d: &[f64],
    v: &DMatrix<f64>,
) -> Result<HermitianMatrix, EnsembleError> {
    let n = h.dim();
    if v.nrows() != n || v.ncols() != d.len() {
        return Err(EnsembleError::DimensionMismatch { h: n, v: v.nrows() });
    }
    if d.iter().any(|&x| x == 0.0) {
        return Err(EnsembleError::ZeroDeformation);
    }
    let mut out = h.clone();
    match &mut out {
        HermitianMatrix::Real(m) => {
            for (l, &dl) in d.iter().enumerate() {
                let col = v.column(l);
                for j in 0..n {
                    let w = dl * col[j];
                    for i in 0..n {
                        m[(i, j)] += col[i] * w;
                    }
                }
            }
        }
        HermitianMatrix::Complex(m) => {
            for (l, &dl) in d.iter().enumerate() {
                let col = v.column(l);
                for j in 0..n {
                    let w = dl * col[j];
                    for i in 0..n {
                        m[(i, j)] += Complex64::new(col[i] * w, 0.0);
                    }
                }
            }
        }
    }
    out.symmetrize();
    Ok(out)
}

/// Convenience: sample `H`, build `V`, and return `(H, V, H + V D V*)`.
///
/// The basis seed is derived from the master seed, not the trial seed, so `V`
/// is the same deterministic deformation across all trials of an experiment.
pub fn sample_deformed(
    spec: &EnsembleSpec,
    deformation: &DeformationSpec,
    matrix_seed: u64,
    basis_seed: u64,
) -> Result<(HermitianMatrix, DMatrix<f64>, HermitianMatrix), EnsembleError> {
    deformation.validate_rank(spec.dim)?;
    let h = sample_wigner(spec, matrix_seed);
    let v = build_basis(&deformation.basis, spec.dim, deformation.rank(), basis_seed)?;
    let deformed = deform(&h, &deformation.eigenvalues, &v)?;
    Ok((h, v, deformed))
}
