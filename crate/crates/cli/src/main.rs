use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use output::{Emitter, Format};

#[derive(Parser, Debug)]
#[command(name = "gammascope", version, about = "Measures a gated Gamma-function identity: self-tests, residual scans, divergence traces and derivation reports")]
pub struct Cli {
    /// Absolute tail tolerance for series truncation.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub abs_tol: f64,

    /// Hard cap on explicit series terms.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_terms: u64,

    /// Truncation depth for gated tail blocks.
    #[arg(long, global = true, default_value_t = 40)]
    pub j_max: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write output to this path instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,

    /// Distance threshold for near-pole handling.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub pole_guard: f64,

    /// Reserved; every run is deterministic already.
    #[arg(long, global = true)]
    pub seedless: bool,

    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Run the classical-identity invariant suites and print a pass/fail table.
    Selftest,
    /// Evaluate the reference Gamma at one point.
    Gamma {
        #[arg(long)]
        s: f64,
    },
    /// Evaluate psi(x+1) at one point.
    Digamma {
        #[arg(long)]
        x: f64,
    },
    /// Evaluate the eta term function at (s, j).
    Eta {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        j: u64,
    },
    /// Evaluate the alpha term function at (s, j).
    Alpha {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        j: u64,
    },
    /// Scan the identity residual over a grid of s.
    Residual {
        #[arg(long)]
        s_start: f64,
        #[arg(long)]
        s_end: f64,
        #[arg(long, default_value_t = 0.25)]
        s_step: f64,
    },
    /// Trace one term family's partial sums at a single s.
    Trace {
        #[arg(long)]
        s: f64,
        #[arg(long, value_enum)]
        family: Family,
    },
    /// Reproduce one of the corollary evaluations.
    Corollary {
        #[arg(long, value_enum)]
        which: Corollary,
    },
    /// Check the integer-s triangle inequality for s = 2..=s_max.
    Inequality {
        #[arg(long)]
        s_max: u64,
    },
    /// Scan the derivation (Leibniz) report over a grid of s.
    Leibniz {
        #[arg(long)]
        s_start: f64,
        #[arg(long)]
        s_end: f64,
        #[arg(long, default_value_t = 0.5)]
        s_step: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Family {
    Eta,
    Alpha,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Corollary {
    ThreeHalves,
    FiveThirds,
}

/// Exit-code contract: 0 completed (findings allowed), 1 usage/config error,
/// 2 numerical failure.
pub enum CliError {
    Usage(String),
    Numerical(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            };
        }
    };

    let emitter = Emitter { format: cli.format, output: cli.output.clone() };
    match commands::run(&cli, &emitter) {
        Ok(()) => ExitCode::from(0),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(2)
        }
    }
}
