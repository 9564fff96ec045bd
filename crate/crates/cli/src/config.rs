use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Parser, ValueEnum};
use hanner_core::inequality::{Checker, Family};
use hanner_core::io::ReportFormat;
use hanner_core::rearrangement::Objective;
use hanner_core::PExponent;

pub const DEFAULT_P_GRID: [f64; 9] = [1.0, 1.1, 1.2, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0];
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Run every applicable checker on an instance file.
    Verify,
    /// Re-run the two built-in instances where sorting by modulus fails.
    Reproduce,
    /// Search block orderings of an instance for the extreme norm.
    Optimize,
    /// Tabulate the critical-point quantities over an (α, β, h, p) grid.
    Explore,
    /// Seeded random search against one checker.
    Fuzz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "hanner-lab", version, about = "Schatten p-norm inequalities for block matrices with diagonal blocks")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Instance JSON (block or PSD form).
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Comma-separated exponents, each >= 1.
    #[arg(long = "p", value_delimiter = ',', allow_negative_numbers = true)]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_TOL, allow_negative_numbers = true)]
    pub tol: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Checker name for verify and fuzz, e.g. theorem1, theorem2, sing_ordering.
    /// A `-forced` suffix is accepted and ignored: named checkers always run.
    #[arg(long)]
    pub checker: Option<String>,
    /// Instance family for fuzz: general, psd or boundary.
    #[arg(long, default_value = "general")]
    pub family: String,
    /// min or max for optimize; defaults to min for p <= 2 and max above.
    #[arg(long)]
    pub objective: Option<String>,
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub instance_path: Option<PathBuf>,
    pub p_list: Vec<PExponent>,
    /// Whether `p_list` came from `--p` rather than the default grid.
    pub p_given: bool,
    pub seed: u64,
    pub trials: u64,
    pub tol: f64,
    pub output_path: Option<PathBuf>,
    pub format: ReportFormat,
    pub checker: Option<Checker>,
    pub family: Family,
    pub objective: Option<Objective>,
}

fn parse_checker(name: &str) -> Result<Checker> {
    let lower = name.trim().to_ascii_lowercase();
    let base = lower.strip_suffix("-forced").or_else(|| lower.strip_suffix("_forced")).unwrap_or(&lower);
    Ok(base.parse()?)
}

impl RunConfig {
    pub fn from_args(a: Args) -> Result<Self> {
        let p_given = !a.p.is_empty();
        let raw: Vec<f64> = if p_given { a.p } else { DEFAULT_P_GRID.to_vec() };
        let p_list = raw.into_iter().map(PExponent::new).collect::<hanner_core::Result<Vec<_>>>()?;
        if a.trials < 1 {
            bail!("--trials must be at least 1");
        }
        if !(a.tol > 0.0 && a.tol.is_finite()) {
            bail!("--tol must be a positive number, got {}", a.tol);
        }
        Ok(Self {
            command: a.command,
            instance_path: a.instance,
            p_list,
            p_given,
            seed: a.seed,
            trials: a.trials,
            tol: a.tol,
            output_path: a.out,
            format: match a.format {
                Format::Json => ReportFormat::Json,
                Format::Csv => ReportFormat::Csv,
            },
            checker: a.checker.as_deref().map(parse_checker).transpose()?,
            family: a.family.parse()?,
            objective: a.objective.as_deref().map(str::parse).transpose()?,
        })
    }
}
