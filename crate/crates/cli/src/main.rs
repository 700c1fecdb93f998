use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    ExitCode::from(hoplab_cli::main_with(&hoplab_cli::Cli::parse()))
}
