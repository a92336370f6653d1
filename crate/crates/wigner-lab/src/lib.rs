//! # wigner-lab
//!
//! A laboratory for finite-rank additive deformations of Wigner matrices.
//!
//! The crate has four layers:
//!
//! - [`theory`] — deterministic formulas: the semicircle density and its
//!   Stieltjes transform, classical eigenvalue locations, the outlier map
//!   `theta(d) = d + 1/d`, moment functionals, and the predicted outlier
//!   fluctuation law.
//! - [`ensembles`] — seeded samplers for real symmetric and complex Hermitian
//!   Wigner matrices with configurable entry distributions, plus rank-k
//!   deformation builders.
//! - [`spectral`] — a dense Hermitian eigensolver (Householder
//!   tridiagonalization + implicit-shift QL), resolvent bilinear forms, and
//!   the determinant-identity root finder.
//! - [`experiments`] — seeded, reproducible Monte Carlo harnesses that test
//!   the probabilistic predictions and produce serializable reports.
//!
//! Everything is deterministic given a configuration and a master seed,
//! independent of worker count.

pub mod ensembles;
pub mod experiments;
pub mod matrix;
pub mod spectral;
pub mod stats;
pub mod theory;

pub use matrix::HermitianMatrix;

// The mdbook guide's code blocks run as doctests so the book cannot drift
// from the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/semicircle.md")]
    mod semicircle {}
    #[doc = include_str!("../../../book/src/ensembles.md")]
    mod ensembles {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/outliers.md")]
    mod outliers {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
