//! Test-only oracles, independent of the production code paths they check.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Adaptive Simpson quadrature for complex-valued integrands.
fn simpson<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fb: Complex64,
    fm: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let h = b - a;
    let whole = (fa + fm * 4.0 + fb) * (h / 6.0);
    let left = (fa + flm * 4.0 + fm) * (h / 12.0);
    let right = (fm + frm * 4.0 + fb) * (h / 12.0);
    let refined = left + right;
    if depth == 0 || (refined - whole).norm() <= 15.0 * tol {
        refined + (refined - whole) / 15.0
    } else {
        simpson(f, a, m, fa, fm, flm, tol / 2.0, depth - 1)
            + simpson(f, m, b, fm, fb, frm, tol / 2.0, depth - 1)
    }
}

/// Stieltjes transform of the semicircle law by numerical quadrature:
/// `m(z) = (2/pi) * Int_0^pi sin(t)^2 / (2 cos(t) - z) dt`
/// (the substitution `xi = 2 cos t` removes the square-root endpoints).
pub fn stieltjes_by_quadrature(z: Complex64) -> Complex64 {
    let f = |t: f64| {
        let s = t.sin();
        Complex64::new(s * s, 0.0) / (Complex64::new(2.0 * t.cos(), 0.0) - z)
    };
    let a = 0.0;
    let b = std::f64::consts::PI;
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    simpson(&f, a, b, fa, fb, fm, 1e-13, 48) * (2.0 / std::f64::consts::PI)
}

/// Naive double-loop evaluation of the moment functionals from explicit
/// matrices, mirroring the defining sums term by term.
pub fn qrs_double_loop(
    m3: &DMatrix<Complex64>,
    m4: &DMatrix<f64>,
    v: &DVector<f64>,
    beta: u8,
) -> (f64, f64, Complex64) {
    let n = v.len();
    let nf = n as f64;
    let mut q = Complex64::new(0.0, 0.0);
    let mut s = Complex64::new(0.0, 0.0);
    let mut r = 0.0;
    for i in 0..n {
        for j in 0..n {
            q += Complex64::new(v[i], 0.0)
                * m3[(i, j)]
                * (v[i] * v[i] + v[j] * v[j])
                * v[j];
            s += Complex64::new(v[i], 0.0) * m3[(i, j)] * v[j];
            r += (m4[(i, j)] - 4.0 + beta as f64) * v[j] * v[j] * v[j] * v[j];
        }
    }
    ((q / (2.0 * nf.sqrt())).re, r / nf, s / nf)
}

/// Deterministic pseudo-random unit vector (splitmix-style hash), independent
/// of the crate's RNG stack.
pub fn hashed_unit_vector(n: usize, salt: u64) -> DVector<f64> {
    let mut state = salt.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1);
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut x = state;
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^= x >> 31;
        (x as f64 / u64::MAX as f64) * 2.0 - 1.0
    };
    let v = DVector::from_fn(n, |_, _| next());
    let norm = v.norm();
    v / norm
}
