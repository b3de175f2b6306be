//! Independent oracles: closed forms, hand-enumerated trees, and analytic
//! one-step probabilities checked against the samplers and the grid solvers.

use std::collections::HashSet;

use riccati_cascade::cascade::{sample_path_extrema, sample_truncated_leaf_count, CascadeParams};
use riccati_cascade::montecarlo::{
    compare_series, estimate_l_tail, estimate_leaf_histogram, estimate_s_tail, estimate_v_curve, Acceptance, McConfig,
};
use riccati_cascade::numerics::{
    convolve_kernel, integrate_tail, iterate_qn, iterate_vn, picard_v0, q0_surrogate, riccati_residual, GridFunction,
    NumericsConfig, UniformGrid,
};
use riccati_cascade::stream::{derive_stream, ClockSource, Vertex};

fn grid() -> UniformGrid {
    UniformGrid::new(8.0, 0.01).unwrap()
}

fn cfg() -> NumericsConfig {
    NumericsConfig::default()
}

fn max_err(f: &GridFunction, exact: impl Fn(f64) -> f64) -> f64 {
    f.grid()
        .nodes()
        .zip(f.values())
        .map(|(t, v)| (v - exact(t)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn substreams_do_not_collide() {
    let words: HashSet<u64> = (0..100_000).map(|i| derive_stream(7, i).word(Vertex::ROOT)).collect();
    assert_eq!(words.len(), 100_000);
}

#[test]
fn alpha_zero_gives_one_or_two_leaves() {
    let h = estimate_leaf_histogram(0.0, 2.0, &McConfig::new(11).with_samples(10_000).with_depth(10)).unwrap();
    assert_eq!(h.occupied_bins(), 2);
    let p = 1.0 - (-2.0f64).exp();
    let se = (p * (1.0 - p) / 10_000.0).sqrt();
    let f = h.frequency(2);
    assert!((f - p).abs() < 3.0 * se, "frequency {f} vs {p}");
    assert_eq!(h.frequency(1) + f, 1.0);
}

#[test]
fn constant_clock_tree_by_hand() {
    let p = CascadeParams::new(1.5, 0).unwrap();
    let one = ClockSource::constant(1.0).unwrap();
    let s = derive_stream(0, 0);
    // path sums 1, 5/3, 19/9: every path crosses 2 in generation 2
    let w = sample_truncated_leaf_count(&p, 2.0, 10, &one, &s).unwrap();
    assert_eq!((w.count, w.truncated), (4, false));

    let p = CascadeParams::new(2.0, 0).unwrap();
    let e = sample_path_extrema(&p, 2, &one, &s).unwrap();
    assert_eq!((e.s_partial, e.l_partial), (1.75, 1.75));
}

#[test]
fn longest_path_explodes_below_one() {
    let l = estimate_l_tail(0.66, &[2.0], 30, &McConfig::new(5).with_samples(2000)).unwrap();
    assert!(l.points[0].mean > 0.999, "{:?}", l.points[0]);
}

#[test]
fn shortest_path_explodes_at_one() {
    // depth 30 is deep enough only for moderate horizons
    let s = estimate_s_tail(1.0, &[1.0, 2.0, 3.0], 30, &McConfig::new(5).with_samples(2000)).unwrap();
    for p in &s.points {
        assert!(1.0 - p.mean <= 3.0 * p.stderr.max(1.0 / 2000.0), "{p:?}");
    }
}

#[test]
fn product_indicator_from_zero_is_root_survival() {
    let g = UniformGrid::new(4.0, 0.01).unwrap();
    let zero = GridFunction::constant(g, 0.0).unwrap();
    let t: Vec<f64> = (0..=8).map(|i| i as f64 * 0.5).collect();
    let est = estimate_v_curve(1.5, &t, 1, &zero, &McConfig::new(3).with_samples(10_000)).unwrap();
    for p in &est.points {
        let exact = (-p.t).exp();
        let se = (exact * (1.0 - exact) / 10_000.0).sqrt().max(1e-4);
        assert!((p.mean - exact).abs() < 3.0 * se, "{p:?} vs {exact}");
    }
}

#[test]
fn kernel_of_one() {
    let g = grid();
    let k = convolve_kernel(&GridFunction::constant(g, 1.0).unwrap(), 1.5, &g).unwrap();
    assert!(max_err(&k, |t| 1.0 - (-t).exp()) < 1e-3);
    assert_eq!(k.values()[0], 0.0);
    let k0 = convolve_kernel(&GridFunction::constant(g, 0.0).unwrap(), 1.5, &g).unwrap();
    assert!(k0.values().iter().all(|&v| v == 0.0));
}

#[test]
fn one_step_closed_forms() {
    let g = grid();
    for alpha in [0.66, 1.5, 3.0] {
        let v1 = iterate_vn(alpha, &g, 1, &GridFunction::constant(g, 0.0).unwrap(), &cfg()).unwrap();
        assert!(max_err(&v1, |t| (-t).exp()) < 1e-3, "alpha {alpha}");
        let q1 = iterate_qn(alpha, &g, 1, &GridFunction::constant(g, 1.0).unwrap(), &cfg()).unwrap();
        assert!(max_err(&q1, |t| 1.0 - (-t).exp()) < 1e-3, "alpha {alpha}");
        let u1 = picard_v0(alpha, &g, 1, &cfg()).unwrap();
        assert!(max_err(&u1, |t| 1.0 - (-t).exp()) < 1e-3, "alpha {alpha}");
    }
}

#[test]
fn fixed_points_are_exact() {
    let g = grid();
    let one = GridFunction::constant(g, 1.0).unwrap();
    let zero = GridFunction::constant(g, 0.0).unwrap();
    assert_eq!(iterate_vn(1.5, &g, 7, &one, &cfg()).unwrap().values(), one.values());
    assert_eq!(iterate_qn(1.5, &g, 7, &zero, &cfg()).unwrap().values(), zero.values());
    assert_eq!(riccati_residual(&one, 1.5).unwrap().max_abs_residual, 0.0);
}

#[test]
fn residual_of_plain_exponential() {
    let g = grid();
    let v = GridFunction::from_fn(g, |t| (-t).exp(), 0.0, true).unwrap();
    let r = riccati_residual(&v, 1.0).unwrap();
    for (t, x) in g.nodes().zip(&r.residuals).step_by(50) {
        assert!((x + (-2.0 * t).exp()).abs() < 1e-4, "t = {t}: {x}");
    }
}

#[test]
fn exponential_integral() {
    let f = GridFunction::from_fn(grid(), |t| (-t).exp(), 0.0, true).unwrap();
    let i = integrate_tail(&f);
    assert!((i.finite_part - (1.0 - (-8.0f64).exp())).abs() < 1e-4);
    assert!(!i.tail_diverges);
    let ones = integrate_tail(&GridFunction::constant(grid(), 1.0).unwrap());
    assert!((ones.finite_part - 8.0).abs() < 1e-12 && ones.tail_diverges);
}

#[test]
fn surrogate_integral_is_finite() {
    let q = picard_v0(1.5, &grid(), 5, &cfg())
        .unwrap()
        .complement()
        .with_tail(0.0)
        .unwrap();
    let i = integrate_tail(&q);
    assert!(i.finite_part.is_finite() && !i.tail_diverges && i.tail_value == 0.0);
    let long = picard_v0(1.5, &UniformGrid::new(16.0, 0.01).unwrap(), 5, &cfg()).unwrap();
    let i16 = integrate_tail(&long.complement().with_tail(0.0).unwrap()).finite_part;
    assert!((i16 - i.finite_part).abs() / i16 < 0.01);
}

#[test]
fn surrogate_below_one_is_identically_one() {
    let q0 = q0_surrogate(0.66, &grid(), 5, &cfg()).unwrap();
    assert!(q0.values().iter().all(|&v| v == 1.0));
}

#[test]
fn longest_path_against_picard_at_three() {
    let alpha = 3.0;
    let g = grid();
    let u8 = picard_v0(alpha, &g, 8, &cfg()).unwrap();
    let u16 = picard_v0(alpha, &g, 16, &cfg()).unwrap();
    let eps = u8
        .values()
        .iter()
        .zip(u16.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let t: Vec<f64> = (0..=16).map(|i| i as f64 * 0.5).collect();
    let l = estimate_l_tail(alpha, &t, 30, &McConfig::new(17).with_samples(10_000)).unwrap();
    let within = l
        .points
        .iter()
        .filter(|p| {
            let diff = (1.0 - p.mean - u8.evaluate(p.t).unwrap()).abs();
            diff <= 4.0 * p.stderr.max(1e-4) + eps
        })
        .count();
    assert!(within as f64 >= 0.95 * t.len() as f64, "{within} of {}", t.len());
}

#[test]
fn comparison_controls() {
    let g = grid();
    let one = GridFunction::constant(g, 1.0).unwrap();
    let t: Vec<f64> = (0..=4).map(|i| i as f64 * 2.0).collect();
    let mc = McConfig::new(21).with_samples(2000);
    let flat = estimate_v_curve(1.5, &t, 5, &one, &mc).unwrap();
    let report = compare_series(&flat, &one, Acceptance::default());
    assert!(report.points.iter().all(|p| p.z == 0.0) && report.passed);

    let v0 = picard_v0(1.5, &g, 5, &cfg()).unwrap();
    let est = estimate_v_curve(1.5, &t, 5, &v0, &mc).unwrap();
    assert!(
        compare_series(
            &est,
            &iterate_vn(1.5, &g, 5, &v0, &cfg()).unwrap(),
            Acceptance::default()
        )
        .passed
    );
    let wrong = iterate_vn(3.0, &g, 5, &picard_v0(3.0, &g, 5, &cfg()).unwrap(), &cfg()).unwrap();
    assert!(!compare_series(&est, &wrong, Acceptance::default()).passed);
}
