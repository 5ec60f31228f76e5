//! Regime map over (chi, phi) for the Hadamard coin, printed as a character
//! grid and written to `phase_diagram_grid.csv`.
//!
//! ```text
//! cargo run --release --example phase_diagram [steps] [points-per-axis]
//! ```

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fs::File;
use std::io::BufWriter;

use nlwalk::analysis::{default_workers, sweep, AxisRange, PointSettings, Regime, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let steps = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1000);
    let points = args.next().map(|s| s.parse()).transpose()?.unwrap_or(21);

    let spec = SweepSpec::new(
        FRAC_PI_4,
        AxisRange::new(0.0, 1.0, points),
        AxisRange::new(0.0, FRAC_PI_2, points),
        PointSettings::new(steps, 200.min(steps + 1)),
    );
    let grid = sweep(&spec, default_workers())?;

    println!("rows: chi from 1 (top) to 0; columns: phi from 0 to pi/2");
    println!(". delocalized   s soliton   T self-trapped   ~ chaotic-like\n");
    for i in (0..grid.chi.len()).rev() {
        let row: String = (0..grid.phi.len())
            .map(|j| match grid.get(i, j).regime {
                Regime::Delocalized => '.',
                Regime::Soliton => 's',
                Regime::SelfTrapped => 'T',
                Regime::ChaoticLike => '~',
            })
            .collect();
        println!("chi {:5.2} | {row}", grid.chi[i]);
    }

    let path = "phase_diagram_grid.csv";
    grid.write_csv(BufWriter::new(File::create(path)?))?;
    println!("\nwrote {path} ({} cells)", grid.cells.len());
    Ok(())
}
