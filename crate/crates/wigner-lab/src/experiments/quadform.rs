//! Exact resampling of the quadratic form `N^(1/2) <v, H v>` from fresh
//! ensemble draws, without materializing matrices.
//!
//! The form is a weighted sum of independent entries. Gaussian families give
//! an exact normal closed form for any unit direction; two-point families
//! compress into per-weight binomial group sums; continuous non-Gaussian
//! families fall back to drawing each group element (cost grows with the
//! direction's support).

use std::collections::BTreeMap;

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

use crate::ensembles::{skewed_two_point_params, EnsembleSpec, EntryFamily, SymmetryClass};

#[derive(Debug, Clone, Copy)]
enum GroupLaw {
    /// Value `a` with probability `p`, `-b` otherwise (unit variance).
    TwoPoint { a: f64, b: f64, p: f64 },
    /// Uniform on `[-sqrt(3), sqrt(3)]` (unit variance).
    Uniform,
}

#[derive(Debug, Clone)]
struct Group {
    /// Combined weight: direction weight times entry scale times sqrt(N).
    weight: f64,
    count: u64,
    law: GroupLaw,
}

#[derive(Debug, Clone)]
enum Sampler {
    /// `N(0, 2/beta)` exactly, any unit direction.
    GaussianClosedForm { sd: f64 },
    Grouped { groups: Vec<Group> },
}

/// Draws of `N^(1/2) <v, H v>` for a fixed real unit direction `v` under a
/// given ensemble; exact in distribution and O(#distinct weights) per draw
/// for two-point families.
#[derive(Debug, Clone)]
pub struct QuadraticFormSampler {
    inner: Sampler,
}

impl QuadraticFormSampler {
    pub fn new(spec: &EnsembleSpec, v: &DVector<f64>) -> Self {
        let n = spec.dim;
        assert_eq!(v.len(), n, "direction length must match the ensemble");
        let beta = spec.beta() as f64;
        let inner = match spec.family {
            EntryFamily::Gaussian => Sampler::GaussianClosedForm {
                sd: (2.0 / beta).sqrt(),
            },
            family => {
                let law = match family {
                    EntryFamily::Rademacher => GroupLaw::TwoPoint {
                        a: 1.0,
                        b: 1.0,
                        p: 0.5,
                    },
                    EntryFamily::SkewedTwoPoint { third_moment } => {
                        let (a, b, p) = skewed_two_point_params(third_moment);
                        GroupLaw::TwoPoint { a, b, p }
                    }
                    EntryFamily::Uniform => GroupLaw::Uniform,
                    EntryFamily::Gaussian => unreachable!(),
                };
                // sqrt(N) times the entry scales.
                let (diag_scale, off_scale) = match spec.class {
                    // diag sqrt(2/N), off 1/sqrt(N)
                    SymmetryClass::RealSymmetric => (2.0f64.sqrt(), 1.0),
                    // diag 1/sqrt(N); off real part 1/sqrt(2N), and only the
                    // real part couples to a real direction
                    SymmetryClass::ComplexHermitian => (1.0, 0.5f64.sqrt()),
                };
                // Group index pairs by bit-exact combined weight.
                let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
                for i in 0..n {
                    let w = v[i] * v[i] * diag_scale;
                    if w != 0.0 {
                        *counts.entry(w.to_bits()).or_insert(0) += 1;
                    }
                }
                for i in 0..n {
                    for j in i + 1..n {
                        let w = 2.0 * v[i] * v[j] * off_scale;
                        if w != 0.0 {
                            *counts.entry(w.to_bits()).or_insert(0) += 1;
                        }
                    }
                }
                let groups = counts
                    .into_iter()
                    .map(|(bits, count)| Group {
                        weight: f64::from_bits(bits),
                        count,
                        law,
                    })
                    .collect();
                Sampler::Grouped { groups }
            }
        };
        QuadraticFormSampler { inner }
    }

    /// Number of weight groups (1 for the Gaussian closed form).
    pub fn group_count(&self) -> usize {
        match &self.inner {
            Sampler::GaussianClosedForm { .. } => 1,
            Sampler::Grouped { groups } => groups.len(),
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match &self.inner {
            Sampler::GaussianClosedForm { sd } => {
                let z: f64 = StandardNormal.sample(rng);
                sd * z
            }
            Sampler::Grouped { groups } => {
                let mut total = 0.0;
                for g in groups {
                    let sum = match g.law {
                        GroupLaw::TwoPoint { a, b, p } => {
                            let k = Binomial::new(g.count, p)
                                .expect("probability in (0,1)")
                                .sample(rng) as f64;
                            a * k - b * (g.count as f64 - k)
                        }
                        GroupLaw::Uniform => {
                            let s = 3.0f64.sqrt();
                            let mut acc = 0.0;
                            for _ in 0..g.count {
                                acc += rng.random_range(-s..s);
                            }
                            acc
                        }
                    };
                    total += g.weight * sum;
                }
                total
            }
        }
    }
}
