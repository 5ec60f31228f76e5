//! How the coin angle changes the outcome at fixed nonlinearity and barrier.
//!
//! ```text
//! cargo run --release --example coin_dependence
//! ```

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

use nlwalk::analysis::{classify_point, PointSettings, Thresholds};

fn main() -> nlwalk::Result<()> {
    let settings = PointSettings::new(2000, 200);
    let thresholds = Thresholds::default();
    let coins = [("pi/12", PI / 12.0), ("pi/6", FRAC_PI_6), ("pi/4", FRAC_PI_4), ("pi/3", FRAC_PI_3), ("pi/2", FRAC_PI_2)];

    for (chi, phi) in [(0.35, FRAC_PI_4), (0.05, 0.05)] {
        println!("chi = {chi}, phi = {phi:.4}");
        for (name, theta) in coins {
            let (outcome, regime) = classify_point(theta, chi, phi, &settings, &thresholds)?;
            println!(
                "  theta = {name:>5}  xi_bar = {:9.2}  sp_bar = {:.4}  fluctuation = {:.3}  {regime}",
                outcome.averages.xi_bar, outcome.averages.sp_bar, outcome.xi_fluctuation
            );
        }
    }
    Ok(())
}
