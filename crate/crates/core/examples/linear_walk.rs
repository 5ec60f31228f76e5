//! Linear Hadamard walk: ballistic lobes, their slowdown behind a barrier,
//! and the `t^-1` decay of the survival probability.
//!
//! ```text
//! cargo run --release --example linear_walk
//! ```

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nlwalk::evolution::{evolve, sites_for_steps, WalkParams};
use nlwalk::observables::{fit_power_law_between, front_positions, peak_positions, Recorder};

fn main() -> nlwalk::Result<()> {
    let steps = 2000;
    for phi in [0.0, FRAC_PI_4] {
        let params = WalkParams::new(FRAC_PI_4, phi, 0.0, sites_for_steps(steps))?;
        let mut state = params.initial_state()?;
        let series = evolve(&mut state, &params, steps, &Recorder::default().snapshots([500, 1000, 2000]))?;

        println!("phi = {phi:.4}  (alpha = {:.4})", params.shift.alpha);
        for snap in &series.snapshots {
            let p = snap.total();
            let (l, r) = peak_positions(&p, series.n0);
            let (fl, fr) = front_positions(&p, series.n0, 0.5);
            let ballistic = params.shift.alpha * snap.t as f64 * FRAC_1_SQRT_2;
            println!(
                "  t = {:4}  peaks -{} / +{}   half-max front -{} / +{}   alpha t / sqrt 2 = {ballistic:.1}",
                snap.t,
                series.n0 - l,
                r - series.n0,
                series.n0 - fl,
                fr - series.n0
            );
        }
        println!("  SP exponent over [100, {steps}] = {:.4}", fit_power_law_between(&series, 100, steps)?);
    }
    Ok(())
}
