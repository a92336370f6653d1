//! Acceptance-scale measurements for the risky statistical bands.
//! Run with `cargo run --release --example scout2`.

use std::time::Instant;

use wigner_lab::ensembles::{BasisRecipe, DeformationSpec, EnsembleSpec, EntryFamily, SymmetryClass};
use wigner_lab::experiments::*;
use wigner_lab::stats::{ks_one_sample, normal_cdf};

fn quantiles(mut xs: Vec<f64>) -> (f64, f64, f64, f64) {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |p: f64| xs[((xs.len() as f64 - 1.0) * p) as usize];
    (q(0.5), q(0.9), q(0.99), *xs.last().unwrap())
}

fn main() {
    let t0 = Instant::now();

    // Rigidity tails at N = 500 and 1000.
    for (n, trials, seed) in [(500usize, 300u64, 42u64), (1000, 300, 42), (1000, 300, 7)] {
        let mut cfg = ExperimentConfig::new(EnsembleSpec::goe(n));
        cfg.trials = trials;
        cfg.master_seed = seed;
        let r = run_rigidity(&cfg).unwrap();
        let (m, q90, q99, max) = quantiles(r.component_values("statistic"));
        println!(
            "rigidity N={n} seed={seed}: median {m:.2} q90 {q90:.2} q99 {q99:.2} max {max:.2} pass {:.3} [{:.0}s]",
            r.pass_fraction,
            t0.elapsed().as_secs_f64()
        );
    }

    // Sticking refinement tail at N = 1000, d = 0.5.
    let mut cfg = ExperimentConfig::new(EnsembleSpec::goe(1000));
    cfg.deformation = Some(DeformationSpec::new(vec![0.5], BasisRecipe::UniformVector).unwrap());
    cfg.trials = 200;
    let r = run_sticking(&cfg).unwrap();
    let (m, q90, q99, max) = quantiles(r.component_values("rank_one_refinement"));
    println!(
        "sticking N=1000 d=0.5: refine median {m:.2} q90 {q90:.2} q99 {q99:.2} max {max:.2}; stat max {:.2}; pass {:.3} [{:.0}s]",
        r.summary().max,
        r.pass_fraction,
        t0.elapsed().as_secs_f64()
    );

    // Outlier distribution at the acceptance configuration (N=1000, 500 trials).
    let mut cfg = ExperimentConfig::new(EnsembleSpec::goe(1000));
    cfg.deformation = Some(DeformationSpec::new(vec![2.0], BasisRecipe::UniformVector).unwrap());
    cfg.trials = 500;
    cfg.oracle.check_trials = 20;
    let r = run_outlier_distribution(&cfg).unwrap();
    let s = r.summary();
    let mut xs = r.component_values("statistic");
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ksn = ks_one_sample(&xs, |x| normal_cdf(x / 1.5f64.sqrt()));
    println!(
        "dist GOE N=1000: mean {:.4} se {:.4} var {:.4} ks2 {:.4} ksN {:.4} oracle_max {:.2e} warn {} [{:.0}s]",
        s.mean,
        s.std_error,
        s.variance,
        s.ks[0].distance,
        ksn,
        r.summaries["oracle_dev"].max,
        r.warnings.len(),
        t0.elapsed().as_secs_f64()
    );

    let mut cfg = ExperimentConfig::new(EnsembleSpec::new(
        SymmetryClass::RealSymmetric,
        EntryFamily::SkewedTwoPoint { third_moment: 1.0 },
        1000,
    ));
    cfg.deformation = Some(DeformationSpec::new(vec![2.0], BasisRecipe::UniformVector).unwrap());
    cfg.trials = 500;
    let r = run_outlier_distribution(&cfg).unwrap();
    let s = r.summary();
    println!(
        "dist skewed N=1000: mean {:.4} se {:.4} (target 0.1875, {:.1} se off) ks2 {:.4} [{:.0}s]",
        s.mean,
        s.std_error,
        (s.mean - 0.1875).abs() / s.std_error,
        s.ks[0].distance,
        t0.elapsed().as_secs_f64()
    );

    let mut cfg = ExperimentConfig::new(EnsembleSpec::goe(1000));
    cfg.deformation = Some(DeformationSpec::new(vec![2.0], BasisRecipe::StandardBasis).unwrap());
    cfg.trials = 500;
    let r = run_outlier_distribution(&cfg).unwrap();
    let s = r.summary();
    println!(
        "dist e1 N=1000: mean {:.4} var {:.4} ks2 {:.4} [{:.0}s]",
        s.mean,
        s.variance,
        s.ks[0].distance,
        t0.elapsed().as_secs_f64()
    );

    // Isotropic + deloc medians across the doubling sweep.
    for n in [250usize, 500, 1000, 2000] {
        let mut cfg = ExperimentConfig::new(EnsembleSpec::goe(n));
        cfg.trials = 16;
        let iso = run_isotropic_law(&cfg).unwrap();
        let del = run_delocalization(&cfg).unwrap();
        let rig = run_rigidity(&cfg).unwrap();
        let med = |r: &ExperimentReport| quantiles(r.component_values("statistic")).0;
        println!(
            "sweep N={n}: iso median {:.3} deloc median {:.3} rigidity median {:.3} [{:.0}s]",
            med(&iso),
            med(&del),
            med(&rig),
            t0.elapsed().as_secs_f64()
        );
    }

    println!("total {:.1}s", t0.elapsed().as_secs_f64());
}
