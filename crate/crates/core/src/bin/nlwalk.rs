use std::process::ExitCode;

use clap::Parser;
use nlwalk::cli::{execute, Cli, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::from_cli(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    for w in &config.warnings {
        eprintln!("warning: {w}");
    }
    match execute(&config) {
        Ok(report) => {
            for path in report.outputs.iter().chain([&report.manifest]) {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
