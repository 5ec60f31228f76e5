use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use nlwalk::error::WalkError;
use nlwalk::observables::{
    fit_power_law, fit_power_law_between, long_time_averages, participation, peak_positions, survival, ObservableSeries,
};

fn distribution(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, 1..max_len)
        .prop_filter("non-zero", |v| v.iter().sum::<f64>() > 1e-6)
        .prop_map(|v| {
            let total: f64 = v.iter().sum();
            v.into_iter().map(|x| x / total).collect()
        })
}

fn power_series(a: f64, steps: usize) -> ObservableSeries {
    let times: Vec<usize> = (0..=steps).collect();
    let sp = times.iter().map(|&t| if t == 0 { 1.0 } else { (t as f64).powf(a) }).collect();
    ObservableSeries::from_columns(times, vec![1.0; steps + 1], sp).unwrap()
}

proptest! {
    #[test]
    fn participation_is_bounded(p in distribution(200)) {
        let occupied = p.iter().filter(|&&x| x > 0.0).count() as f64;
        let xi = participation(&p).unwrap();
        prop_assert!(xi >= 1.0 - 1e-12);
        prop_assert!(xi <= occupied + 1e-9);
    }

    #[test]
    fn survival_never_exceeds_the_maximum(p in distribution(200), pick in 0usize..200) {
        let n0 = pick % p.len();
        let max = p.iter().cloned().fold(0.0, f64::max);
        prop_assert!(survival(&p, n0) <= max);
    }

    #[test]
    fn averages_ignore_prepended_records(prefix in prop::collection::vec((0.0..100.0f64, 0.0..1.0f64), 0..50),
                                         tail in prop::collection::vec((0.0..100.0f64, 0.0..1.0f64), 20..60)) {
        let window = 20;
        let build = |rows: Vec<(f64, f64)>| {
            let times = (0..rows.len()).collect();
            let (xi, sp) = rows.into_iter().unzip();
            ObservableSeries::from_columns(times, xi, sp).unwrap()
        };
        let short = long_time_averages(&build(tail.clone()), window).unwrap();
        let long = long_time_averages(&build(prefix.into_iter().chain(tail).collect()), window).unwrap();
        prop_assert_eq!(short, long);
    }
}

#[test]
fn participation_examples() {
    assert_eq!(participation(&[0.0, 1.0, 0.0]).unwrap(), 1.0);
    assert_abs_diff_eq!(participation(&[0.25; 4]).unwrap(), 4.0, epsilon = 1e-12);
    assert_eq!(participation(&[0.5, 0.0, 0.5]).unwrap(), 2.0);
    assert!(matches!(participation(&[0.0; 5]), Err(WalkError::DegenerateDistribution(_))));
}

#[test]
fn power_law_exponents_are_recovered() {
    for a in [-2.0, -1.0, -0.5, 0.0] {
        let fitted = fit_power_law(&power_series(a, 500), 10).unwrap();
        assert_abs_diff_eq!(fitted, a, epsilon = 1e-9);
    }
    let window = fit_power_law_between(&power_series(-1.0, 500), 100, 200).unwrap();
    assert_abs_diff_eq!(window, -1.0, epsilon = 1e-9);
}

#[test]
fn power_law_needs_enough_points() {
    let err = fit_power_law(&power_series(-1.0, 20), 15).unwrap_err();
    assert!(matches!(err, WalkError::InsufficientData { needed: 10, available: 6 }));
}

#[test]
fn averages_over_the_whole_series() {
    let series = ObservableSeries::from_columns(vec![0, 1, 2, 3], vec![1.0, 2.0, 3.0, 4.0], vec![1.0; 4]).unwrap();
    let avg = long_time_averages(&series, 4).unwrap();
    assert_eq!((avg.xi_bar, avg.sp_bar), (2.5, 1.0));
    assert!(matches!(long_time_averages(&series, 5), Err(WalkError::InsufficientData { needed: 5, available: 4 })));
}

#[test]
fn peaks_of_a_delta_stay_at_origin() {
    let mut p = vec![0.0; 11];
    p[5] = 1.0;
    assert_eq!(peak_positions(&p, 5), (5, 5));
    p[5] = 0.4;
    p[1] = 0.1;
    p[2] = 0.2;
    p[9] = 0.3;
    assert_eq!(peak_positions(&p, 5), (2, 9));
}
