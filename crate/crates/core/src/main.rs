use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    aqf::cli::run(&aqf::cli::Cli::parse())
}
