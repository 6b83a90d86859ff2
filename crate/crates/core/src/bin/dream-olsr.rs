use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dream_olsr::cli::{execute, Cli};

fn main() -> ExitCode {
    match execute(&Cli::parse()) {
        Ok(summary) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout(), "{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
