//! Subcommand definitions and dispatch.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cdyn_core::{Complex, Polynomial};

use crate::config::expand_args;
use crate::error::{CliError, CliResult};
use crate::format::parse_polynomial;

mod classify;
mod disc;
mod julia;
mod linearize;
mod measure;

/// Numerical experiments in one-dimensional polynomial dynamics.
///
/// Polynomials are given with `-p` as ascending comma-separated coefficients,
/// each `RE` or `RE±IMi`, e.g. `-p "-1,0,1"` for z² − 1. Every command writes a
/// JSON report; a `--config FILE` of `key=value` lines supplies default flags.
///
/// Exit codes: 0 ok, 2 parse error, 3 numerical failure or failed check,
/// 4 exceptional basepoint, 5 resonance or small denominator, 6 not a self-map
/// of the disc.
#[derive(Debug, Parser)]
#[command(name = "cdyn", version, args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cycles of a given period with multipliers and classes.
    Classify(classify::Args),
    /// Point cloud on the Julia set from backward orbits.
    Julia(julia::Args),
    /// Experiments on the equilibrium measure.
    #[command(subcommand)]
    Measure(measure::Cmd),
    /// Linearizing coordinates at a fixed point, and arithmetic checks.
    Linearize(linearize::Args),
    /// Holomorphic self-maps of the unit disc and univalent functions.
    #[command(subcommand)]
    Disc(disc::Cmd),
}

#[derive(Debug, Clone, clap::Args)]
pub struct ReportOut {
    /// Write the JSON report to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Seeded {
    /// Seed of the random streams; required whenever sampling is used.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of independent sampling tasks, run in parallel.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub tasks: u64,
}

impl Seeded {
    pub fn tasks(&self) -> usize {
        self.tasks as usize
    }

    pub fn require_seed(&self) -> CliResult<u64> {
        self.seed
            .ok_or_else(|| CliError::parse("this command samples at random and requires --seed"))
    }
}

/// Parses the arguments (after config expansion), runs the command and maps
/// the outcome to an exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv = match expand_args(args.into_iter().map(Into::into).collect()) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    e.exit_code()
}

pub fn execute(command: &Command) -> CliResult<()> {
    match command {
        Command::Classify(a) => classify::run(a),
        Command::Julia(a) => julia::run(a),
        Command::Measure(c) => measure::run(c),
        Command::Linearize(a) => linearize::run(a),
        Command::Disc(c) => disc::run(c),
    }
}

pub(crate) fn cjson(z: Complex) -> Value {
    json!([z.re + 0.0, z.im + 0.0])
}

pub(crate) fn dynamical_polynomial(text: &str) -> CliResult<Polynomial> {
    let p = parse_polynomial(text)?;
    if p.degree() < 2 {
        return Err(CliError::parse(format!("polynomial {text:?} must have degree at least 2")));
    }
    Ok(p)
}

pub(crate) fn create(path: &Path) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub(crate) fn emit(out: &ReportOut, report: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(report)?;
    match &out.report {
        Some(path) => {
            let mut f = create(path)?;
            writeln!(f, "{text}")?;
            f.flush()?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
            stdout.flush()?;
        }
    }
    Ok(())
}

pub(crate) fn require(pass: bool, what: impl FnOnce() -> String) -> CliResult<()> {
    if pass {
        Ok(())
    } else {
        Err(CliError::Assertion(what()))
    }
}
