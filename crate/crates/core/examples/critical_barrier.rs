//! Critical barrier phi_c(chi) separating mobile from self-trapped dynamics.
//!
//! ```text
//! cargo run --release --example critical_barrier
//! ```

use std::f64::consts::FRAC_PI_4;

use nlwalk::analysis::{critical_curve, default_workers, CriticalSearch, PointSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let chis = [0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.5];
    let search = CriticalSearch { settings: PointSettings::new(2000, 200), threshold: 0.1, tol: 1e-3 };
    let curve = critical_curve(FRAC_PI_4, &chis, &search, default_workers())?;

    for p in &curve.points {
        let note = if p.multimodal() { format!("  ({} crossings in the scan)", p.crossings) } else { String::new() };
        println!("chi = {:.2}  phi_c = {:.4}{note}", p.chi, p.phi_c);
    }
    for chi in &curve.no_transition {
        println!("chi = {chi:.2}  no crossing below pi/2");
    }
    println!("strictly decreasing: {}", curve.is_strictly_decreasing());
    curve.write_csv(std::io::stdout().lock())?;
    Ok(())
}
