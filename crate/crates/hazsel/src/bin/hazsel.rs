use std::process::ExitCode;

use clap::Parser;
use hazsel::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hazsel: error: {e}");
            ExitCode::FAILURE
        }
    }
}
