use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use stone_inflation::cli::{run, Cli, RunConfig, EXIT_USAGE};

fn main() -> ExitCode {
    let config = RunConfig::from(Cli::parse());
    let outcome = match run(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &config.output {
        Some(path) => std::fs::write(path, &outcome.report),
        None => std::io::stdout()
            .lock()
            .write_all(outcome.report.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(outcome.exit_code as u8)
}
