mod args;
mod commands;
mod error;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => commands::generate(&a),
        Command::Cluster(a) => commands::cluster(&a),
        Command::Baseline(a) => commands::baseline(&a),
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Gyre(a) => commands::gyre(&a),
        Command::Walk(a) => commands::walk(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
