//! Cross-checks the in-place stepping kernel against explicit `2N x 2N`
//! operator products and reports the unitarity defect of each factor.
//!
//! ```text
//! cargo run --release --example oracle_check
//! ```

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use nlwalk::evolution::{
    coin_operator_matrix, dense_step_oracle, kerr_matrix, shift_matrix, step, unitarity_defect, KerrMode, WalkParams,
};

fn main() -> nlwalk::Result<()> {
    let sites = 16;
    println!("{:>6} {:>6} {:>5} {:>13} {:>11} {:>11} {:>11}", "theta", "phi", "chi", "max |diff|", "K defect", "C defect", "S defect");
    for theta in [0.0, 0.3, FRAC_PI_4, 1.2, FRAC_PI_2] {
        for phi in [0.0, 0.4, FRAC_PI_4, FRAC_PI_2] {
            for chi in [0.0, 0.25, 0.5, 1.0] {
                let params = WalkParams::new(theta, phi, chi, sites)?;
                let mut kernel = params.initial_state()?;
                let mut oracle = kernel.clone();
                let mut diff = 0.0_f64;
                let mut kerr = 0.0_f64;
                for _ in 0..10 {
                    kerr = kerr.max(unitarity_defect(&kerr_matrix(&kernel, chi, KerrMode::Total)));
                    step(&mut kernel, &params)?;
                    oracle = dense_step_oracle(&oracle, &params)?;
                    let pairs = kernel.to_vector().into_iter().zip(oracle.to_vector());
                    diff = pairs.map(|(a, b)| (a - b).norm()).fold(diff, f64::max);
                }
                println!(
                    "{theta:6.3} {phi:6.3} {chi:5.2} {diff:13.2e} {kerr:11.2e} {:11.2e} {:11.2e}",
                    unitarity_defect(&coin_operator_matrix(&params.coin, sites)),
                    unitarity_defect(&shift_matrix(&params.shift, sites, params.boundary))
                );
            }
        }
    }
    Ok(())
}
