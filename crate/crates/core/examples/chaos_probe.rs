//! Sensitivity to initial conditions: distance between a trajectory and a
//! copy nudged by 1e-12 at the origin.
//!
//! Linear walks keep the distance at the size of the nudge; strong
//! nonlinearity amplifies it to order one within a few hundred steps, so
//! long-time observables there depend on rounding.
//!
//! ```text
//! cargo run --release --example chaos_probe
//! ```

use std::f64::consts::FRAC_PI_4;

use nlwalk::analysis::divergence_probe;

fn main() -> nlwalk::Result<()> {
    let steps = 1000;
    for (chi, phi) in [(0.0, 0.0), (0.2, 0.0), (0.4, 0.0), (0.4, FRAC_PI_4), (0.8, FRAC_PI_4)] {
        let d = divergence_probe(FRAC_PI_4, chi, phi, steps, 1e-12)?;
        let samples: Vec<String> = [0, 50, 100, 200, 500, steps].iter().map(|&t| format!("{:.1e}", d[t])).collect();
        println!("chi = {chi:.1}, phi = {phi:.4}: {}", samples.join("  "));
    }
    Ok(())
}
