//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.
//!
//! Run with `cargo test --release --test acceptance`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use nlwalk::analysis::{
    classify_point, critical_curve, relative_std, sweep, AxisRange, CriticalSearch, PointSettings, Regime, SweepSpec, Thresholds,
};
use nlwalk::evolution::{
    coin_operator_matrix, dense_step_oracle, evolve, kerr_matrix, shift_matrix, sites_for_steps, step,
    unitarity_defect, Boundary, KerrMode, WalkParams,
};
use nlwalk::fiberloop::{loop_evolve, loop_step, LoopState};
use nlwalk::observables::{
    fit_power_law_between, front_positions, long_time_averages, peak_positions, ObservableSeries, Recorder,
};
use nlwalk::state::WalkerState;

type Check = fn() -> Verdict;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn walk(theta: f64, phi: f64, chi: f64, steps: usize, recorder: &Recorder) -> ObservableSeries {
    let params = WalkParams::new(theta, phi, chi, sites_for_steps(steps)).unwrap();
    let mut state = params.initial_state().unwrap();
    evolve(&mut state, &params, steps, recorder).unwrap()
}

fn snapshot_at(theta: f64, phi: f64, chi: f64, t: usize) -> (Vec<f64>, usize) {
    let series = walk(theta, phi, chi, t, &Recorder::with_stride(t).snapshots([t]));
    (series.snapshots[0].total().into_inner(), series.n0)
}

fn xi_between(series: &ObservableSeries, t_min: usize, t_max: usize) -> Vec<f64> {
    series.between(t_min, t_max).map(|(_, xi, _)| xi).collect()
}

fn grid_state(sites: usize, seed: u64) -> WalkerState {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut amp = || (0..sites).map(|_| Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))).collect();
    let up = amp();
    let down = amp();
    WalkerState::from_amplitudes(up, down, sites / 2).unwrap()
}

fn criterion_1() -> Verdict {
    let sites = 16;
    let thetas = [0.0, PI / 8.0, FRAC_PI_4, 3.0 * PI / 8.0, FRAC_PI_2];
    let phis = [0.0, FRAC_PI_6, FRAC_PI_4, FRAC_PI_2];
    let chis = [0.0, 0.2, 0.5, 1.0];
    let (mut amp_err, mut unit_err) = (0.0_f64, 0.0_f64);
    let mut cases = 0;
    for (i, &theta) in thetas.iter().enumerate() {
        for (j, &phi) in phis.iter().enumerate() {
            for (k, &chi) in chis.iter().enumerate() {
                for mode in [KerrMode::Total, KerrMode::PerComponent] {
                    let params = WalkParams::new(theta, phi, chi, sites).unwrap().kerr_mode(mode);
                    let starts = [params.initial_state().unwrap(), grid_state(sites, (i * 16 + j * 4 + k) as u64)];
                    for start in starts {
                        let (mut kernel, mut oracle) = (start.clone(), start);
                        for _ in 0..10 {
                            for m in [
                                kerr_matrix(&kernel, chi, mode),
                                coin_operator_matrix(&params.coin, sites),
                                shift_matrix(&params.shift, sites, Boundary::Periodic),
                            ] {
                                unit_err = unit_err.max(unitarity_defect(&m));
                            }
                            step(&mut kernel, &params).unwrap();
                            oracle = dense_step_oracle(&oracle, &params).unwrap();
                            for (a, b) in kernel.to_vector().iter().zip(oracle.to_vector()) {
                                amp_err = amp_err.max((a - b).norm());
                            }
                        }
                        cases += 1;
                    }
                }
            }
        }
    }
    verdict(
        amp_err <= 1e-12 && unit_err <= 1e-12,
        format!("{cases} trajectories x 10 steps, max |kernel - oracle| = {amp_err:.2e}, max unitarity defect = {unit_err:.2e} (tol 1e-12)"),
    )
}

fn criterion_2() -> Verdict {
    let (p, n0) = snapshot_at(FRAC_PI_4, 0.0, 0.0, 500);
    let (l, r) = peak_positions(&p, n0);
    let (dl, dr) = (n0 as i64 - l as i64, r as i64 - n0 as i64);
    let peaks_ok = (dl - 354).abs() <= 2 && (dr - 354).abs() <= 2;
    let (fl, fr) = front_positions(&p, n0, 0.5);
    let series = walk(FRAC_PI_4, 0.0, 0.0, 2000, &Recorder::default());
    let a = fit_power_law_between(&series, 100, 2000).unwrap();
    let fit_ok = (a + 1.0).abs() <= 0.15;
    verdict(
        peaks_ok && fit_ok,
        format!(
            "peaks at n0-{dl}, n0+{dr} (want 354 +/- 2: {}); SP exponent {a:.4} (want -1 +/- 0.15: {}); [info] half-max front at n0-{}, n0+{}",
            ok(peaks_ok),
            ok(fit_ok),
            n0 - fl,
            fr - n0
        ),
    )
}

fn criterion_3() -> Verdict {
    let (p, n0) = snapshot_at(FRAC_PI_4, FRAC_PI_4, 0.0, 500);
    let (l, r) = peak_positions(&p, n0);
    let (dl, dr) = (n0 as i64 - l as i64, r as i64 - n0 as i64);
    let pass = (dl - 250).abs() <= 2 && (dr - 250).abs() <= 2;
    let (fl, fr) = front_positions(&p, n0, 0.5);
    verdict(
        pass,
        format!("peaks at n0-{dl}, n0+{dr} (want 250 +/- 2); [info] half-max front at n0-{}, n0+{}", n0 - fl, fr - n0),
    )
}

fn criterion_4() -> Verdict {
    let series = walk(FRAC_PI_4, 0.0, 0.2, 2000, &Recorder::default());
    let xi = xi_between(&series, 1000, 2000);
    let mean = xi.iter().sum::<f64>() / xi.len() as f64;
    let rel = relative_std(&xi);
    let a = fit_power_law_between(&series, 100, 2000).unwrap();
    let pass = rel < 0.25 && mean <= 20.0 && (a + 1.0).abs() <= 0.2;
    verdict(
        pass,
        format!("xi over [1000, 2000]: mean {mean:.3} (<= 20), rel. std {rel:.4} (< 0.25); SP exponent over [100, 2000] {a:.4} (-1 +/- 0.2)"),
    )
}

fn criterion_5() -> Verdict {
    let series = walk(FRAC_PI_4, FRAC_PI_4, 0.4, 5000, &Recorder::default());
    let avg = long_time_averages(&series, 200).unwrap();
    let a = fit_power_law_between(&series, 1000, 5000).unwrap();
    verdict(
        avg.sp_bar >= 0.1 && a > -0.1,
        format!("sp_bar(last 200 of 5000) {:.4} (>= 0.1); SP exponent over [1000, 5000] {a:.4} (> -0.1)", avg.sp_bar),
    )
}

fn criterion_6() -> Verdict {
    let mut worst = 0.0_f64;
    for theta in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_2] {
        for chi in [0.0, 0.4, 0.9] {
            let series = walk(theta, FRAC_PI_2, chi, 1000, &Recorder::default());
            worst = series.sp.iter().fold(worst, |w, &sp| w.max((sp - 1.0).abs()));
        }
    }
    verdict(worst <= 1e-10, format!("3x3 (theta, chi) grid, 1000 steps, max |SP - 1| = {worst:.2e} (tol 1e-10)"))
}

fn criterion_7() -> Verdict {
    let search = CriticalSearch { settings: PointSettings::new(2000, 200), threshold: 0.1, tol: 1e-3 };
    let curve = critical_curve(FRAC_PI_4, &[0.2, 0.3, 0.4, 0.5], &search, workers()).unwrap();
    let mut listing: Vec<(f64, String)> = curve
        .points
        .iter()
        .map(|p| (p.chi, format!("{:.1}->{:.4}{}", p.chi, p.phi_c, if p.multimodal() { "*" } else { "" })))
        .collect();
    listing.extend(curve.no_transition.iter().map(|&chi| (chi, format!("{chi:.1}->none"))));
    listing.sort_by(|a, b| a.0.total_cmp(&b.0));
    let listing: Vec<String> = listing.into_iter().map(|(_, s)| s).collect();
    verdict(
        curve.is_strictly_decreasing(),
        format!("phi_c(chi) = [{}] strictly decreasing required (* = several crossings in prescan, none = no crossing below pi/2)", listing.join(", ")),
    )
}

fn criterion_8() -> Verdict {
    let settings = PointSettings::new(2000, 200);
    let thresholds = Thresholds::default();
    let (a, _) = classify_point(FRAC_PI_6, 0.35, FRAC_PI_4, &settings, &thresholds).unwrap();
    let a_ok = a.averages.sp_bar >= 0.4;
    let (b, regime) = classify_point(FRAC_PI_2, 0.05, 0.05, &settings, &thresholds).unwrap();
    let b_ok = regime == Regime::Delocalized && b.averages.xi_bar >= 100.0;
    let series = walk(FRAC_PI_2, 0.0, 0.0, 2000, &Recorder::default());
    let c_err = series.xi[1..].iter().fold(0.0_f64, |w, &xi| w.max((xi - 2.0).abs()));
    let c_ok = c_err <= 1e-12;
    verdict(
        a_ok && b_ok && c_ok,
        format!(
            "(pi/6, 0.35, pi/4) sp_bar {:.4} (>= 0.4: {}); (pi/2, 0.05, 0.05) {regime}, xi_bar {:.1} (delocalized, >= 100: {}); (pi/2, 0, 0) max |xi - 2| = {c_err:.1e} for t >= 1 ({})",
            a.averages.sp_bar,
            ok(a_ok),
            b.averages.xi_bar,
            ok(b_ok),
            ok(c_ok)
        ),
    )
}

fn criterion_9() -> Verdict {
    let mut peaks_ok = true;
    let mut listing = Vec::new();
    for t in [100, 200] {
        let sites = sites_for_steps(t);
        let mut pulse = LoopState::single_pulse(sites, sites / 2, 0.0).unwrap();
        let series = loop_evolve(&mut pulse, t, &Recorder::with_stride(t).snapshots([t])).unwrap();
        let lp = peak_positions(&series.snapshots[0].total(), series.n0);
        let (p, n0) = snapshot_at(FRAC_PI_4, 0.0, 0.0, t);
        let wp = peak_positions(&p, n0);
        let close = |a: usize, b: usize| a.abs_diff(b) <= 2;
        peaks_ok &= close(lp.0, wp.0) && close(lp.1, wp.1);
        listing.push(format!("t={t}: loop ({}, {}) walk ({}, {})", lp.0, lp.1, wp.0, wp.1));
    }
    let mut norm_err = 0.0_f64;
    for gamma in [0.0, 1.0, 5.0] {
        let mut pulse = LoopState::single_pulse(2003, 1001, gamma).unwrap();
        for _ in 0..1000 {
            loop_step(&mut pulse);
            norm_err = norm_err.max((pulse.norm_sqr() - 1.0).abs());
        }
    }
    let norm_ok = norm_err <= 1e-10;
    verdict(
        peaks_ok && norm_ok,
        format!("{} ({}); max |norm - 1| over 1000 round trips, gamma in {{0, 1, 5}}: {norm_err:.2e} ({})", listing.join("; "), ok(peaks_ok), ok(norm_ok)),
    )
}

fn criterion_10() -> Verdict {
    let settings = PointSettings::default();
    let spec = SweepSpec::new(FRAC_PI_4, AxisRange::new(0.0, 1.0, 21), AxisRange::new(0.0, FRAC_PI_2, 21), settings);
    let csv = |workers: usize| {
        let mut buf = Vec::new();
        sweep(&spec, workers).unwrap().write_csv(&mut buf).unwrap();
        buf
    };
    let (one, eight) = (csv(1), csv(8));
    verdict(
        one == eight,
        format!("21x21 grid ({} steps), CSV {} bytes with 1 worker vs {} bytes with 8 workers, identical = {}", spec.settings.steps, one.len(), eight.len(), one == eight),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISSED"
    }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("unitarity / dense oracle", criterion_1),
        ("linear Hadamard walk", criterion_2),
        ("barrier-slowed linear walk", criterion_3),
        ("soliton regime", criterion_4),
        ("self-trapped regime", criterion_5),
        ("endpoint localization", criterion_6),
        ("critical-curve monotonicity", criterion_7),
        ("coin dependence", criterion_8),
        ("fiber-loop linear equivalence", criterion_9),
        ("determinism", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let started = Instant::now();
        let v = check();
        failed += usize::from(!v.pass);
        println!(
            "[{}] criterion {id:>2} {name}: {} ({:.1}s)",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            started.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
