use fastexp::cli::random_series;
use fastexp::driver::exp_series_planned;
use fastexp::{
    exp_series, exp_series_with, naive_exp, naive_log, naive_mul, naive_reciprocal,
    newton_reciprocal, plan_parameters, Complex64, ExpConfig, Series,
};

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn exp_times_exp_neg_is_one() {
    for (i, n) in [33usize, 100, 257, 1000, 2048, 4096].into_iter().enumerate() {
        let f = random_series(i as u64, n);
        let a = exp_series(&f, n).unwrap();
        let b = exp_series(&f.neg(), n).unwrap();
        assert!(max_diff(&naive_mul(&a, &b, n), &Series::one(n)) < 1e-8, "n = {n}");
    }
}

#[test]
fn log_of_exp_recovers_input() {
    for (i, n) in [40usize, 128, 777, 2048, 4096].into_iter().enumerate() {
        let f = random_series(100 + i as u64, n);
        let back = naive_log(&exp_series(&f, n).unwrap(), n).unwrap();
        assert!(max_diff(&back, &f) < 1e-7, "n = {n}");
    }
}

#[test]
fn fast_and_naive_paths_agree() {
    for n in (33..=512).step_by(7) {
        let f = random_series(n as u64, n);
        let plan = plan_parameters(n, &ExpConfig::default()).unwrap();
        assert!(!plan.is_naive());
        let fast = exp_series(&f, n).unwrap();
        let slow = naive_exp(&f, n).unwrap();
        assert!(max_diff(&fast, &slow) <= 1e-8 * (1.0 + slow.max_abs()), "n = {n}");
    }
}

#[test]
fn order_one_thousand_matches_recurrence() {
    let f = random_series(2024, 1000);
    let g = exp_series(&f, 1000).unwrap();
    let want = naive_exp(&f, 1000).unwrap();
    assert!(max_diff(&g, &want) <= 1e-8 * want.max_abs());
}

#[test]
fn result_is_prefix_of_padded_result() {
    let cfg = ExpConfig::default();
    for n in [100usize, 500, 1000, 1500, 3000] {
        let plan = plan_parameters(n, &cfg).unwrap();
        let padded = plan.padded_n();
        let f = random_series(9, padded);
        let short = exp_series_with(&f, n, &cfg).unwrap().series;
        let full = exp_series_with(&f, padded, &cfg).unwrap();
        if full.plan.blocks == plan.blocks {
            // same layout, same arithmetic
            assert_eq!(&full.series[..n], &short[..], "n = {n}");
        } else {
            assert!(max_diff(&full.series[..n], &short) < 1e-12, "n = {n}");
        }
        // forcing the short plan's layout onto the padded order is exact
        let mut forced = plan;
        forced.n = padded;
        let forced = exp_series_planned(&f, &forced, &cfg).unwrap();
        assert_eq!(&forced.series[..n], &short[..]);
    }
}

#[test]
fn top_level_count_and_all_levels() {
    let out = exp_series_with(&random_series(1, 1024), 1024, &ExpConfig::default()).unwrap();
    assert_eq!((out.plan.s(), out.plan.m()), (8, 64));
    assert_eq!(out.top_level.total_at(128), 100);
    assert!(out.all_levels.total() > out.top_level.total());

    let naive = exp_series_with(&random_series(1, 20), 20, &ExpConfig::default()).unwrap();
    assert!(naive.plan.is_naive());
    assert!(naive.all_levels.is_zero());
}

#[test]
fn custom_threshold_changes_the_path() {
    let f = random_series(4, 64);
    let cfg = ExpConfig { naive_threshold: 4 };
    let out = exp_series_with(&f, 64, &cfg).unwrap();
    assert!(!out.plan.is_naive());
    assert!(max_diff(&out.series, &naive_exp(&f, 64).unwrap()) < 1e-12);
}

#[test]
fn newton_reciprocal_identity_and_agreement() {
    // h = 2·exp(f): the reciprocal stays bounded, as for the driver's use
    let h: Series = naive_exp(&random_series(8, 256), 256)
        .unwrap()
        .iter()
        .map(|c| c * 2.0)
        .collect();
    let r = newton_reciprocal(&h, 64).unwrap();
    assert!(max_diff(&naive_mul(&h, &r, 64), &Series::one(64)) < 1e-10);
    for n in [1usize, 5, 64, 200, 256] {
        let fast = newton_reciprocal(&h, n).unwrap();
        let slow = naive_reciprocal(&h, n).unwrap();
        assert!(max_diff(&fast, &slow) < 1e-10, "n = {n}");
    }
}

#[test]
fn short_inputs_are_zero_padded() {
    let f = Series::from_real(&[0.0, 0.5]);
    let g = exp_series(&f, 200).unwrap();
    let want = naive_exp(&f, 200).unwrap();
    assert!(max_diff(&g, &want) < 1e-15);
}
