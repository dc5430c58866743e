//! Command-line front end; the `tribox` binary is a thin wrapper over [`run`].
//!
//! Exit codes: 0 when the requested analysis completed (whatever it
//! concluded), 1 on execution failure or a failed reproduction claim, 2 on
//! invalid input.

mod analyze;
mod output;
mod quantum;
mod reproduce;
mod sweep;

pub use analyze::{run_analysis, Analysis, AnalysisParams};
pub use output::flatten;
pub use reproduce::{reproduce, Claim, ReproduceOptions, ReproduceReport};
pub use sweep::{run_sweep, SweepRow, SweepSpec};

use crate::boxes::{family_box, json::BoxFile, FamilyKind, FamilyParam};
use clap::{Parser, Subcommand};
use output::{Format, Output};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(name = "tribox", version, about = "Tripartite correlation boxes and LHV-LHS decompositions")]
pub struct Cli {
    /// Probability tolerance (default 1e-9; 1e-12 for reproduce-paper).
    #[arg(long, global = true, help_heading = "Global options")]
    pub tol: Option<f64>,
    /// Emit JSON (the default).
    #[arg(long, global = true, help_heading = "Global options", conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long, global = true, help_heading = "Global options")]
    pub csv: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true, help_heading = "Global options")]
    pub out: Option<PathBuf>,
    /// Report wall time on stderr.
    #[arg(long, global = true, help_heading = "Global options")]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a noisy Mermin or Svetlichny box.
    Family {
        kind: FamilyKind,
        /// Visibility, 0 < V <= 1.
        #[arg(long)]
        v: f64,
    },
    /// Run analyses on a box file (`-` reads stdin).
    Analyze(analyze::AnalyzeArgs),
    /// Run analyses over a range of visibilities.
    Sweep(sweep::SweepArgs),
    /// Check every quantitative claim and print a pass/fail table.
    ReproducePaper(reproduce::ReproduceArgs),
    /// States and Born-rule boxes.
    #[command(subcommand)]
    Quantum(quantum::QuantumCommand),
}

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::LpNonConvergence { .. } => Self::failure(e.to_string()),
            _ => Self::input(e.to_string()),
        }
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn read_input(path: &std::path::Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| CliError::input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }
}

fn execute(cli: &Cli) -> CliResult<Output> {
    let format = if cli.csv { Format::Csv } else { Format::Json };
    match &cli.command {
        Command::Family { kind, v } => {
            let bx = family_box(&FamilyParam::new(*kind, *v)?);
            Ok(Output::from_box(&BoxFile::from_tripartite(&bx)))
        }
        Command::Analyze(args) => analyze::command(args, cli.tol.unwrap_or(crate::tol::PROB)),
        Command::Sweep(args) => sweep::command(args, cli.tol.unwrap_or(crate::tol::PROB), format),
        Command::ReproducePaper(args) => reproduce::command(args, cli.tol, format),
        Command::Quantum(q) => quantum::command(q, cli.tol.unwrap_or(crate::tol::MAT)),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Output goes to stdout or `--out`; diagnostics to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let format = if cli.csv { Format::Csv } else { Format::Json };
    let result = execute(&cli).and_then(|out| {
        let failed = out.failed_claims.clone();
        out.write(format, cli.json, cli.out.as_deref())?;
        if failed.is_empty() {
            Ok(())
        } else {
            Err(CliError::failure(format!("failed claims: {}", failed.join(", "))))
        }
    });
    if cli.timing {
        eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
