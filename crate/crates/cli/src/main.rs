mod args;
mod commands;
mod report;
mod selftest;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{CliResult, Output};

/// Exit status when the self-test finds a failing check.
const SELFTEST_FAILED: u8 = 1;

fn dispatch(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Measure(a) => commands::measure(a),
        Command::Bell(a) => commands::bell(a),
        Command::Distill(c) => commands::distill(c),
        Command::Sim(a) => commands::sim(a),
        Command::Channel(c) => commands::channel(c),
        Command::Selftest(a) => selftest::run(a.seed, a.trials),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            if cli.json {
                print!("{}", report::render(&report::document(out.command, &out.digest, out.results)));
            } else {
                print!("{}", out.text);
            }
            if out.failures > 0 {
                ExitCode::from(SELFTEST_FAILED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
