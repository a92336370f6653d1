//! Quick timing of the eigensolver kernel at experiment sizes.
//!
//! Run with `cargo run --release --example bench_eigh`.

use std::time::Instant;

use wigner_lab::ensembles::{sample_wigner, EnsembleSpec};
use wigner_lab::spectral::{eigh, eigvalsh};

fn main() {
    for &n in &[500usize, 1000, 2000] {
        let spec = EnsembleSpec::goe(n);
        let h = sample_wigner(&spec, 1);

        let t = Instant::now();
        let vals = eigvalsh(&h).unwrap();
        let dt_vals = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let dec = eigh(&h).unwrap();
        let dt_full = t.elapsed().as_secs_f64();

        println!(
            "N={n:5}  eigvalsh {dt_vals:7.3}s  eigh {dt_full:7.3}s  lambda_max {:.6} {:.6}",
            vals[n - 1],
            dec.eigenvalues()[n - 1]
        );
    }
}
