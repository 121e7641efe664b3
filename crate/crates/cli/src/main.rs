mod args;
mod commands;
mod input;
mod pgm;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Preprocess(a) => commands::preprocess::run(a),
        Command::Factorize(a) => commands::factorize::run(a),
        Command::Npp(a) => commands::npp::run(a),
        Command::Uniqueness(a) => commands::uniqueness::run(a),
        Command::Fixtures(a) => commands::fixtures::run(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
