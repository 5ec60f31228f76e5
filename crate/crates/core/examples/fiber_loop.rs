//! Time-multiplexed fiber-loop emulation. At zero Kerr coefficient the
//! pulse train reproduces the Hadamard walk; larger coefficients hold light
//! near the injection slot.
//!
//! ```text
//! cargo run --release --example fiber_loop
//! ```

use std::f64::consts::FRAC_PI_4;

use nlwalk::evolution::{evolve, sites_for_steps, WalkParams};
use nlwalk::fiberloop::{loop_evolve, LoopState};
use nlwalk::observables::{fit_power_law_between, long_time_averages, peak_positions, Recorder};

fn main() -> nlwalk::Result<()> {
    let steps = 2000;
    let sites = sites_for_steps(steps);

    let walk = WalkParams::new(FRAC_PI_4, 0.0, 0.0, sites)?;
    let mut state = walk.initial_state()?;
    let walk_series = evolve(&mut state, &walk, 200, &Recorder::with_stride(200).snapshots([200]))?;
    let walk_peaks = peak_positions(&walk_series.snapshots[0].total(), walk.n0);

    let mut baseline = None;
    for gamma in [0.0, 1.0, 3.0, 5.0, std::f64::consts::TAU * 0.4] {
        let mut pulses = LoopState::single_pulse(sites, sites / 2, gamma)?;
        let series = loop_evolve(&mut pulses, steps, &Recorder::default().snapshots([200]))?;
        let peaks = peak_positions(&series.snapshots[0].total(), series.n0);
        let sp_bar = long_time_averages(&series, 200)?.sp_bar;
        let base = *baseline.get_or_insert(sp_bar);
        println!(
            "gamma = {gamma:5.3}  peaks at m=200: {peaks:?}  SP exponent = {:7.3}  sp_bar = {sp_bar:.3e} ({:.1}x linear)  norm = {:.12}",
            fit_power_law_between(&series, 100, steps)?,
            sp_bar / base,
            pulses.norm_sqr()
        );
    }
    println!("walk peaks at t=200: {walk_peaks:?}");
    Ok(())
}
