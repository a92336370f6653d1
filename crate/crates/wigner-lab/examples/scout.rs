//! Scratch sweep to eyeball experiment statistics before pinning acceptance
//! bands. Run with `cargo run --release --example scout`.

use std::time::Instant;

use wigner_lab::ensembles::{BasisRecipe, DeformationSpec, EnsembleSpec, EntryFamily, SymmetryClass};
use wigner_lab::experiments::*;
use wigner_lab::stats::{ks_one_sample, normal_cdf};

fn main() {
    let t0 = Instant::now();

    // Outlier distribution, GOE delocalized, moderate size.
    let mut cfg = ExperimentConfig::new(EnsembleSpec::goe(300));
    cfg.deformation = Some(DeformationSpec::new(vec![2.0], BasisRecipe::UniformVector).unwrap());
    cfg.trials = 200;
    cfg.distribution.predicted_draws = 20_000;
    let report = run_outlier_distribution(&cfg).unwrap();
    let s = report.summary();
    let mut xs = report.component_values("statistic");
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ks_normal = ks_one_sample(&xs, |x| normal_cdf(x / 1.5f64.sqrt()));
    println!(
        "outlier-dist GOE N=300: mean {:.4} (se {:.4}) var {:.4} ks2 {:.4} ksN(0,1.5) {:.4} pass {}",
        s.mean, s.std_error, s.variance, s.ks[0].distance, ks_normal, report.pass
    );

    // Skewed mean shift.
    let mut cfg = ExperimentConfig::new(EnsembleSpec::new(
        SymmetryClass::RealSymmetric,
        EntryFamily::SkewedTwoPoint { third_moment: 1.0 },
        300,
    ));
    cfg.deformation = Some(DeformationSpec::new(vec![2.0], BasisRecipe::UniformVector).unwrap());
    cfg.trials = 200;
    cfg.distribution.predicted_draws = 20_000;
    let report = run_outlier_distribution(&cfg).unwrap();
    let s = report.summary();
    println!(
        "outlier-dist skewed N=300: mean {:.4} (se {:.4}) expected shift {:.4} ks2 {:.4}",
        s.mean,
        s.std_error,
        report.metadata["predicted_mean_shift_d=2"],
        s.ks[0].distance
    );

    // Localized spike.
    let mut cfg = ExperimentConfig::new(EnsembleSpec::goe(300));
    cfg.deformation = Some(DeformationSpec::new(vec![2.0], BasisRecipe::StandardBasis).unwrap());
    cfg.trials = 200;
    cfg.distribution.predicted_draws = 20_000;
    let report = run_outlier_distribution(&cfg).unwrap();
    let s = report.summary();
    println!(
        "outlier-dist e1 N=300: mean {:.4} var {:.4} ks2 {:.4}",
        s.mean, s.variance, s.ks[0].distance
    );

    // Isotropic / rigidity / delocalization snapshots.
    for n in [250usize, 500] {
        let mut cfg = ExperimentConfig::new(EnsembleSpec::goe(n));
        cfg.trials = 30;
        let iso = run_isotropic_law(&cfg).unwrap();
        let rig = run_rigidity(&cfg).unwrap();
        let del = run_delocalization(&cfg).unwrap();
        println!(
            "N={n}: iso max {:.3} (pass {:.2}) rig max {:.3} deloc max {:.3} row_sum max {:.3}",
            iso.summary().max,
            iso.pass_fraction,
            rig.summary().max,
            del.summary().max,
            del.summaries["edge_row_sum"].max
        );
    }

    // Sticking supercritical + subcritical.
    for d in [0.5, 2.0] {
        let mut cfg = ExperimentConfig::new(EnsembleSpec::goe(300));
        cfg.deformation = Some(DeformationSpec::new(vec![d], BasisRecipe::UniformVector).unwrap());
        cfg.trials = 50;
        let report = run_sticking(&cfg).unwrap();
        println!(
            "sticking d={d}: stat max {:.3} pass {:.2} components {:?}",
            report.summary().max,
            report.pass_fraction,
            report.summaries.keys().collect::<Vec<_>>()
        );
    }

    // BBP mini-scan.
    let mut cfg = ExperimentConfig::new(EnsembleSpec::goe(500));
    cfg.trials = 30;
    cfg.bbp.w_grid = vec![20.0, -20.0];
    let report = run_bbp_scan(&cfg).unwrap();
    println!(
        "bbp N=500: edge(w=20) mean {:.3} expected {:.3}; gap(w=-20) mean {:.4}",
        report.summaries["edge_shift_w=20"].mean,
        report.metadata["expected_edge_shift_w=20"],
        report.summaries["gap_w=-20"].mean
    );

    println!("total {:.1}s", t0.elapsed().as_secs_f64());
}
