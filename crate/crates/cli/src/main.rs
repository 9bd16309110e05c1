use std::process::ExitCode;

use clap::Parser;

mod commands;
mod error;
mod series;

use commands::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("truncvar: {e}");
            e.exit_code()
        }
    }
}
