use std::process::ExitCode;

use clap::Parser;
use illposed_cli::Cli;

fn main() -> ExitCode {
    ExitCode::from(illposed_cli::run(Cli::parse()))
}
