//! The runnable examples, exercised at reduced sizes.

use riccati_cascade::checks::CheckSettings;
use riccati_cascade::io::{FigurePreset, FigureSettings, MANIFEST_FILE};

#[path = "../examples/leaf_histogram.rs"]
mod leaf_histogram;

#[test]
fn leaf_histogram_heavy_tail_only_between_one_and_two() {
    let hists = leaf_histogram::run_example(2000).unwrap();
    let max: Vec<u64> = hists.iter().map(|(_, h)| h.max_observed).collect();
    assert!(max[1] > max[0] && max[1] > max[2], "{max:?}");
}

#[path = "../examples/v_curve.rs"]
mod v_curve;

#[test]
fn v_curve_agrees_with_grid() {
    assert!(v_curve::run_example(2000).unwrap().passed);
}

#[path = "../examples/picard_v0.rs"]
mod picard_v0;

#[test]
fn picard_v0_iterates_decrease() {
    let us = picard_v0::run_example(0.05).unwrap();
    for w in us.windows(2) {
        assert!(w[1].values().iter().zip(w[0].values()).all(|(b, a)| b <= a));
    }
}

#[path = "../examples/q_iteration.rs"]
mod q_iteration;

#[test]
fn q_iteration_integrals_are_stable() {
    let v = q_iteration::run_example(0.02).unwrap();
    assert!(v.iter().all(|x| x.is_finite() && *x > 0.0), "{v:?}");
}

#[path = "../examples/path_tails.rs"]
mod path_tails;

#[test]
fn path_tails_longest_dominates_shortest() {
    let (s, l) = path_tails::run_example(500).unwrap();
    for (a, b) in s.points.iter().zip(&l.points) {
        assert!(a.mean <= b.mean);
    }
}

#[path = "../examples/riccati_residual.rs"]
mod riccati_residual;

#[test]
fn riccati_residual_residual_shrinks_with_step() {
    let rows = riccati_residual::run_example(&[0.04, 0.02], &[20]).unwrap();
    assert!(rows[1].2 < rows[0].2, "{rows:?}");
}

#[path = "../examples/figure_bundle.rs"]
mod figure_bundle;

#[test]
fn figure_bundle_writes_verified_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let settings = FigureSettings {
        t_max: 4.0,
        step: 0.05,
        mc_step: 1.0,
        ..FigureSettings::default()
    };
    let run = figure_bundle::run_example(FigurePreset::Fig1, &settings, 300, dir.path()).unwrap();
    assert!(run.join(MANIFEST_FILE).exists());
}

#[path = "../examples/regime_sweep.rs"]
mod regime_sweep;

#[test]
fn regime_sweep_positive_only_in_window() {
    let pts = regime_sweep::run_example(&[0.66, 1.5, 3.0], 0.02).unwrap();
    let pos: Vec<bool> = pts.iter().map(|p| p.positive).collect();
    assert_eq!(pos, [false, true, false]);
}

#[path = "../examples/invariant_check.rs"]
mod invariant_check;

#[test]
fn invariant_check_suite_passes_at_subcritical_alpha() {
    let mut s = CheckSettings::new(0.66, 3);
    s.samples = 500;
    s.step = 0.05;
    assert!(invariant_check::run_example(&s).unwrap().passed);
}
