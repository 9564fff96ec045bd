//! `hanner-lab`: verification campaigns, counterexample reproduction,
//! ordering search and critical-point exploration.
//!
//! Exit codes: 0 when everything checked holds, 1 on usage, parse or
//! precondition errors, 2 on a genuine violation.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::Parser;

use commands::{Output, Status};
use config::{Args, Command, RunConfig};

fn run(cfg: &RunConfig) -> Result<Output> {
    match cfg.command {
        Command::Verify => commands::verify(cfg),
        Command::Reproduce => commands::reproduce(cfg),
        Command::Optimize => commands::optimize(cfg),
        Command::Explore => commands::explore(cfg),
        Command::Fuzz => commands::fuzz(cfg),
    }
}

fn emit(cfg: &RunConfig, body: &[u8]) -> Result<()> {
    match &cfg.output_path {
        Some(path) => std::fs::write(path, body).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body)?;
            Ok(out.flush()?)
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = RunConfig::from_args(args).and_then(|cfg| {
        let out = run(&cfg)?;
        emit(&cfg, &out.body)?;
        Ok(out)
    });
    match result {
        Ok(out) => {
            eprintln!("{}", out.summary);
            match out.status {
                Status::Holds => ExitCode::SUCCESS,
                Status::Violation => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
