//! Pathwise and structural invariants over random parameters.

use proptest::prelude::*;

use riccati_cascade::cascade::{
    sample_path_crossing, sample_path_extrema, sample_product_indicator, sample_truncated_leaf_count, CascadeParams,
    LeafCountSample,
};
use riccati_cascade::io::{read_grid_function, read_histogram_csv, write_grid_function, write_histogram_csv};
use riccati_cascade::montecarlo::Histogram;
use riccati_cascade::numerics::{convolve_kernel, GridFunction, UniformGrid};
use riccati_cascade::stream::{derive_stream, ClockSource};

fn alpha() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), 0.2f64..4.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn streams_are_pure_functions(seed in any::<u64>(), i in any::<u64>(), a in alpha(), t in 0.0f64..4.0) {
        let p = CascadeParams::new(a, seed).unwrap();
        let s = derive_stream(seed, i);
        let c = ClockSource::Exponential;
        let first = sample_truncated_leaf_count(&p, t, 8, &c, &s).unwrap();
        let again = sample_truncated_leaf_count(&p, t, 8, &c, &derive_stream(seed, i)).unwrap();
        prop_assert_eq!(first, again);
    }

    #[test]
    fn leaf_count_grows_with_depth(seed in any::<u64>(), i in 0u64..1000, a in alpha(), t in 0.0f64..3.0) {
        let p = CascadeParams::new(a, seed).unwrap();
        let s = derive_stream(seed, i);
        let c = ClockSource::Exponential;
        let mut prev = LeafCountSample { count: 0, truncated: true };
        for n in 0..=10 {
            let w = sample_truncated_leaf_count(&p, t, n, &c, &s).unwrap();
            prop_assert!(w.count >= prev.count);
            if !prev.truncated {
                prop_assert_eq!(w, prev);
            }
            if !w.truncated {
                prop_assert!(w.count >= 1);
            }
            prev = w;
        }
    }

    #[test]
    fn path_extrema_grow_with_depth(seed in any::<u64>(), i in 0u64..1000, a in 0.5f64..4.0) {
        let p = CascadeParams::new(a, seed).unwrap();
        let s = derive_stream(seed, i);
        let c = ClockSource::Exponential;
        let mut prev = sample_path_extrema(&p, 0, &c, &s).unwrap();
        prop_assert_eq!(prev.s_partial, prev.l_partial);
        for n in 1..=8 {
            let e = sample_path_extrema(&p, n, &c, &s).unwrap();
            prop_assert!(e.s_partial <= e.l_partial);
            prop_assert!(e.s_partial >= prev.s_partial && e.l_partial >= prev.l_partial);
            prev = e;
        }
    }

    #[test]
    fn crossing_agrees_with_extrema(seed in any::<u64>(), i in 0u64..1000, a in 0.5f64..4.0, t in 0.0f64..6.0) {
        let p = CascadeParams::new(a, seed).unwrap();
        let s = derive_stream(seed, i);
        let c = ClockSource::Exponential;
        let e = sample_path_extrema(&p, 8, &c, &s).unwrap();
        let x = sample_path_crossing(&p, 8, t, &c, &s).unwrap();
        prop_assert_eq!(x.shortest_exceeds, e.s_partial > t);
        prop_assert_eq!(x.longest_exceeds, e.l_partial > t);
    }

    #[test]
    fn product_indicator_stays_in_unit_interval(seed in any::<u64>(), i in 0u64..1000, a in alpha(), t in 0.0f64..4.0, n in 0u32..8) {
        let p = CascadeParams::new(a, seed).unwrap();
        let x0 = |s: f64| 1.0 - (-s).exp();
        let x = sample_product_indicator(&p, t, n, &x0, &ClockSource::Exponential, &derive_stream(seed, i)).unwrap();
        prop_assert!((0.0..=1.0).contains(&x));
    }

    #[test]
    fn interpolation_stays_between_neighbours(values in prop::collection::vec(0.0f64..1.0, 2..40), u in 0.0f64..1.0) {
        let g = UniformGrid::from_len(0.1, values.len()).unwrap();
        let f = GridFunction::new(g, values.clone(), 1.0, true).unwrap();
        let t = u * g.t_max();
        let i = ((t / 0.1).floor() as usize).min(values.len() - 2);
        let (lo, hi) = (values[i].min(values[i + 1]), values[i].max(values[i + 1]));
        let v = f.evaluate(t).unwrap();
        prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
        prop_assert_eq!(f.evaluate(g.t_max() + 1.0).unwrap(), 1.0);
    }

    #[test]
    fn kernel_preserves_unit_interval(values in prop::collection::vec(0.0f64..1.0, 2..60), a in alpha()) {
        let g = UniformGrid::from_len(0.05, values.len()).unwrap();
        let f = GridFunction::new(g, values, 0.5, true).unwrap();
        let k = convolve_kernel(&f, a, &g).unwrap();
        // the trapezoid weights of e^{-s} sum to at most 1 + h^2 / 12
        prop_assert!(k.values().iter().all(|v| (0.0..=1.0 + 0.05 * 0.05).contains(v)));
        prop_assert_eq!(k.values()[0], 0.0);
    }

    #[test]
    fn grid_function_round_trips(values in prop::collection::vec(-10.0f64..10.0, 2..30), tail in -1.0f64..1.0) {
        let dir = tempfile::tempdir().unwrap();
        let f = GridFunction::new(UniformGrid::from_len(0.125, values.len()).unwrap(), values, tail, false).unwrap();
        let path = dir.path().join("f.csv");
        write_grid_function(&f, &path).unwrap();
        let g = read_grid_function(&path).unwrap();
        prop_assert_eq!(g.values(), f.values());
        prop_assert_eq!(g.tail_value(), f.tail_value());
    }

    #[test]
    fn histogram_round_trips(counts in prop::collection::vec((0u64..200, any::<bool>()), 1..200)) {
        let samples: Vec<LeafCountSample> = counts
            .iter()
            .map(|&(count, truncated)| LeafCountSample { count, truncated })
            .collect();
        let h = Histogram::from_samples(&samples);
        prop_assert_eq!(h.total, samples.len() as u64);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.csv");
        write_histogram_csv(&h, &path).unwrap();
        prop_assert_eq!(read_histogram_csv(&path).unwrap(), h);
    }
}
