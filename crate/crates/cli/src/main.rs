mod args;
mod commands;
mod error;
mod grid;
mod output;
mod settings;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Model(a) => commands::model::run(a),
        Command::Sim(a) => commands::sim::run(a),
        Command::Tune(a) => commands::tune::run(a),
        Command::Coalesce(a) => commands::trace::coalesce_cmd(a),
        Command::Analyze(a) => commands::trace::analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
