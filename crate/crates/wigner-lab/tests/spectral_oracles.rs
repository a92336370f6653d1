//! Spectral module against reconstruction, interlacing, monotonicity, and
//! determinant-identity oracles.

mod support;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use wigner_lab::ensembles::{
    build_basis, deform, mix_seed, sample_wigner, BasisRecipe, EnsembleSpec,
};
use wigner_lab::matrix::HermitianMatrix;
use wigner_lab::spectral::{deformed_eigenvalues_via_det, eigh, eigvalsh, EigenBasis};
use wigner_lab::theory::theta;

fn reconstruction_and_orthonormality(h: &HermitianMatrix) -> (f64, f64) {
    let dec = eigh(h).unwrap();
    let n = dec.dim();
    let scale = h.max_abs().max(1e-300);
    let mut recon = 0.0f64;
    for alpha in 0..n {
        let u = dec.eigenvector(alpha);
        let lambda = dec.eigenvalues()[alpha];
        for r in 0..n {
            let mut hu = Complex64::new(0.0, 0.0);
            for c in 0..n {
                let entry = match h {
                    HermitianMatrix::Real(m) => Complex64::new(m[(r, c)], 0.0),
                    HermitianMatrix::Complex(m) => m[(r, c)],
                };
                hu += entry * u[c];
            }
            recon = recon.max((hu - Complex64::new(lambda, 0.0) * u[r]).norm());
        }
    }
    let mut ortho = 0.0f64;
    match dec.basis() {
        EigenBasis::Real(u) => {
            let g = u.transpose() * u;
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    ortho = ortho.max((g[(i, j)] - expect).abs());
                }
            }
        }
        EigenBasis::Complex(u) => {
            for i in 0..n {
                for j in 0..n {
                    let dot: Complex64 = (0..n).map(|r| u[(r, i)].conj() * u[(r, j)]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    ortho = ortho.max((dot - Complex64::new(expect, 0.0)).norm());
                }
            }
        }
    }
    (recon / scale, ortho)
}

#[test]
fn reconstruction_residuals_both_classes() {
    for (i, &n) in [16usize, 64, 128].iter().enumerate() {
        let real = sample_wigner(&EnsembleSpec::goe(n), 100 + i as u64);
        let (recon, ortho) = reconstruction_and_orthonormality(&real);
        assert!(recon <= 1e-10, "real n={n}: {recon:.3e}");
        assert!(ortho <= 1e-10, "real n={n}: {ortho:.3e}");

        let complex = sample_wigner(&EnsembleSpec::gue(n), 200 + i as u64);
        let (recon, ortho) = reconstruction_and_orthonormality(&complex);
        assert!(recon <= 1e-10, "complex n={n}: {recon:.3e}");
        assert!(ortho <= 1e-10, "complex n={n}: {ortho:.3e}");
    }
}

#[test]
fn trace_identity() {
    for seed in 0..5u64 {
        let h = sample_wigner(&EnsembleSpec::goe(96), seed);
        let vals = eigvalsh(&h).unwrap();
        let sum: f64 = vals.iter().sum();
        let bound = 1e-9 * 96.0 * h.max_abs();
        assert!((sum - h.trace()).abs() <= bound);
    }
}

#[test]
fn weyl_interlacing_hundred_rank_one_instances() {
    let n = 64;
    for seed in 0..100u64 {
        let h = sample_wigner(&EnsembleSpec::goe(n), seed);
        let v = build_basis(&BasisRecipe::RandomOrthonormal, n, 1, mix_seed(7, seed)).unwrap();
        let d = 0.2 + 2.0 * ((seed as f64 * 0.37).fract());
        let ht = deform(&h, &[d], &v).unwrap();
        let lambda = eigvalsh(&h).unwrap();
        let mu = eigvalsh(&ht).unwrap();
        for alpha in 0..n {
            assert!(
                mu[alpha] >= lambda[alpha] - 1e-9,
                "seed={seed} alpha={alpha}"
            );
            if alpha + 1 < n {
                assert!(
                    mu[alpha] <= lambda[alpha + 1] + 1e-9,
                    "seed={seed} alpha={alpha}"
                );
            }
        }
    }
}

#[test]
fn resolvent_monotone_between_eigenvalues() {
    // x -> G_vv(x) is strictly increasing between consecutive eigenvalues.
    let n = 24;
    let h = sample_wigner(&EnsembleSpec::goe(n), 5);
    let dec = eigh(&h).unwrap();
    let v: DVector<Complex64> = support::hashed_unit_vector(n, 1).map(|x| Complex64::new(x, 0.0));
    let vals = dec.eigenvalues();
    for gap in vals.windows(2) {
        let (lo, hi) = (gap[0], gap[1]);
        if hi - lo < 1e-6 {
            continue;
        }
        let mut prev = f64::NEG_INFINITY;
        for t in 1..=5 {
            let x = lo + (hi - lo) * t as f64 / 6.0;
            let g = dec
                .resolvent_bilinear(&v, &v, Complex64::new(x, 0.0))
                .unwrap()
                .re;
            assert!(g > prev, "not increasing at x={x}");
            prev = g;
        }
    }
}

#[test]
fn det_identity_matches_eigh_rank_one() {
    let n = 200;
    let h = sample_wigner(&EnsembleSpec::goe(n), 11);
    let v = build_basis(&BasisRecipe::UniformVector, n, 1, 0).unwrap();
    let d = [2.0];
    let ht = deform(&h, &d, &v).unwrap();
    let dec = eigh(&h).unwrap();
    let mu = eigvalsh(&ht).unwrap();
    let lambda_top = dec.eigenvalues()[n - 1];
    let roots = deformed_eigenvalues_via_det(
        &dec,
        &v,
        &d,
        (lambda_top + 1e-6, 4.0),
        (4.0 - lambda_top) / 2000.0,
    )
    .unwrap();
    assert_eq!(roots.len(), 1);
    assert!(
        (roots[0] - mu[n - 1]).abs() <= 1e-8,
        "root {} vs mu_N {}",
        roots[0],
        mu[n - 1]
    );
    // The outlier sits near theta(2) = 2.5.
    assert!((roots[0] - theta(2.0).unwrap()).abs() < 0.3);
}

#[test]
fn det_identity_matches_eigh_rank_two_both_sides() {
    let n = 150;
    let h = sample_wigner(&EnsembleSpec::goe(n), 13);
    let v = build_basis(&BasisRecipe::RandomOrthonormal, n, 2, 3).unwrap();
    let d = [-2.0, 2.0];
    let ht = deform(&h, &d, &v).unwrap();
    let dec = eigh(&h).unwrap();
    let mu = eigvalsh(&ht).unwrap();
    let (lo, hi) = (dec.eigenvalues()[0], dec.eigenvalues()[n - 1]);

    let right = deformed_eigenvalues_via_det(&dec, &v, &d, (hi + 1e-6, 4.0), 0.0).unwrap();
    assert_eq!(right.len(), 1);
    assert!((right[0] - mu[n - 1]).abs() <= 1e-8);

    let left = deformed_eigenvalues_via_det(&dec, &v, &d, (-4.0, lo - 1e-6), 0.0).unwrap();
    assert_eq!(left.len(), 1);
    assert!((left[0] - mu[0]).abs() <= 1e-8);
}

#[test]
fn det_identity_complex_class() {
    let n = 80;
    let h = sample_wigner(&EnsembleSpec::gue(n), 17);
    let v = build_basis(&BasisRecipe::UniformVector, n, 1, 0).unwrap();
    let d = [1.7];
    let ht = deform(&h, &d, &v).unwrap();
    let dec = eigh(&h).unwrap();
    let mu = eigvalsh(&ht).unwrap();
    let hi = dec.eigenvalues()[n - 1];
    let roots = deformed_eigenvalues_via_det(&dec, &v, &d, (hi + 1e-6, 4.0), 0.0).unwrap();
    assert_eq!(roots.len(), 1);
    assert!((roots[0] - mu[n - 1]).abs() <= 1e-8);
}

#[test]
fn eigenvector_projection_pole_structure() {
    // v = u_alpha and z = lambda_alpha + i eta: the sum is dominated by the
    // single pole 1/(-i eta) = i/eta.
    let n = 32;
    let h = sample_wigner(&EnsembleSpec::goe(n), 23);
    let dec = eigh(&h).unwrap();
    let alpha = n / 2;
    let u = dec.eigenvector(alpha);
    let eta = 1e-6;
    let z = Complex64::new(dec.eigenvalues()[alpha], eta);
    let g = dec.resolvent_bilinear(&u, &u, z).unwrap();
    assert!((g.im - 1.0 / eta).abs() / (1.0 / eta) < 1e-3);
}

#[test]
fn deformed_matrix_matches_det_roots_on_zero_matrix_multi_rank() {
    // H = 0, k = 2, d = (3, 5) with standard basis: roots exactly at 3 and 5.
    let n = 10;
    let h = HermitianMatrix::Real(DMatrix::zeros(n, n));
    let dec = eigh(&h).unwrap();
    let v = build_basis(&BasisRecipe::StandardBasis, n, 2, 0).unwrap();
    let roots = deformed_eigenvalues_via_det(&dec, &v, &[3.0, 5.0], (0.5, 8.0), 0.0).unwrap();
    assert_eq!(roots.len(), 2);
    assert!((roots[0] - 3.0).abs() < 1e-9);
    assert!((roots[1] - 5.0).abs() < 1e-9);
}
