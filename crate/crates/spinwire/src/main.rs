use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use spinwire::cli::Cli;
use spinwire::commands;

/// Exit codes: 0 pass, 1 the checked property failed, 2 usage or input error.
fn main() -> ExitCode {
    let cfg = match Cli::parse().into_config() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let outcome = match commands::run(&cfg) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, &outcome.payload),
        None => std::io::stdout().write_all(outcome.payload.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(2);
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
