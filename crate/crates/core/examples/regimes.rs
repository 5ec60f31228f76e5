//! Mobile solitons versus self-trapping on the Hadamard walk.
//!
//! Weak nonlinearity without a barrier launches two non-dispersive lobes;
//! adding the barrier pins part of the probability at the origin.
//!
//! ```text
//! cargo run --release --example regimes
//! ```

use std::f64::consts::FRAC_PI_4;

use nlwalk::analysis::{classify_regime, relative_std, Thresholds};
use nlwalk::evolution::{evolve, sites_for_steps, WalkParams};
use nlwalk::observables::{fit_power_law_between, long_time_averages, Recorder};

fn main() -> nlwalk::Result<()> {
    let steps = 3000;
    let thresholds = Thresholds::default();
    for (label, chi, phi) in [("linear", 0.0, 0.0), ("soliton", 0.2, 0.0), ("trapped", 0.4, FRAC_PI_4), ("strong", 0.8, FRAC_PI_4)] {
        let params = WalkParams::new(FRAC_PI_4, phi, chi, sites_for_steps(steps))?;
        let mut state = params.initial_state()?;
        let series = evolve(&mut state, &params, steps, &Recorder::default())?;
        let avg = long_time_averages(&series, 200)?;
        let tail = &series.xi[series.len() - 200..];
        let regime = classify_regime(avg.xi_bar, avg.sp_bar, tail, &thresholds);

        println!("{label:>8}: chi = {chi}, phi = {phi:.4}");
        for t in [10, 100, 1000, steps] {
            println!("          t = {t:5}  xi = {:9.3}  SP = {:.3e}", series.xi[t], series.sp[t]);
        }
        println!(
            "          xi_bar = {:.3}, sp_bar = {:.4}, xi rel. std = {:.3}, SP exponent [500, {steps}] = {:.3} -> {regime}",
            avg.xi_bar,
            avg.sp_bar,
            relative_std(tail),
            fit_power_law_between(&series, 500, steps)?
        );
    }
    Ok(())
}
