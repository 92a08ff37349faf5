mod args;
mod error;
mod icost;
mod nontrivial;
mod report;
mod rulingset;
mod simulate;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use bbsim::blackboard::DEFAULT_STEP_BUDGET;
use clap::Parser;

use args::{Cli, Command};
use error::{CliError, CliResult};
use report::Outcome;

fn step_budget() -> CliResult<u64> {
    match std::env::var("BBSIM_STEP_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| CliError::Usage(format!("BBSIM_STEP_BUDGET={v} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_STEP_BUDGET),
    }
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let budget = step_budget()?;
    match &cli.command {
        Command::Simulate(a) => simulate::simulate(a, budget),
        Command::Nontrivial(a) => nontrivial::nontrivial(a),
        Command::Rulingset(a) => rulingset::rulingset(a),
        Command::Icost(a) => icost::icost(a),
        Command::Goodprob(a) => icost::goodprob(a),
    }
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Report(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        emit(&cli, &out.text)?;
        Ok(out.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("bbsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
