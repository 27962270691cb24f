//! `kernelmap`: evaluate, solve, certify and measure real-kernel α-harmonic maps.
//!
//! Exit codes: 0 success, 1 a certification or verification failed,
//! 2 configuration error, 3 numerical failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kernelmap::Error;

#[derive(Parser)]
#[command(name = "kernelmap", version, about = "Real-kernel alpha-harmonic mappings of the unit disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
pub struct Common {
    /// JSON job configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Polar grid NRxNT, overriding the config.
    #[arg(long)]
    grid: Option<String>,
    /// Quadrature nodes, overriding the config.
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample u on a polar grid as CSV (r, theta, re_u, im_u, jacobian).
    Eval(Common),
    /// Solve the Dirichlet problem from boundary data and sample the solution as CSV.
    Solve(Common),
    /// Print the univalence bounds N, M, L as JSON.
    Bounds {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Certify u = F_1 z + c F_k conj(z)^k; exit 1 if any check fails.
    Certify(Common),
    /// Closed-form and quadrature areas, optionally an alpha sweep, as JSON.
    Area(Common),
    /// Run the verification suites; exit 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = kernelmap::verify::DEFAULT_SEED)]
        seed: u64,
        /// Suite to run (repeatable); all suites when omitted.
        #[arg(long)]
        suite: Vec<String>,
        /// Harness self-test: negate every reference value.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

/// An error with its exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn io(e: std::io::Error) -> Self {
        Self {
            code: 2,
            message: format!("output error: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invalid(_) | Error::Domain(_) | Error::DegenerateAlpha(_) => 2,
            Error::Overflow(_) | Error::NoConvergence { .. } | Error::Degenerate(_) => 3,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(c) => commands::eval(&c),
        Command::Solve(c) => commands::solve(&c),
        Command::Bounds { common, alpha, k } => commands::bounds(&common, alpha, k),
        Command::Certify(c) => commands::certify(&c),
        Command::Area(c) => commands::area(&c),
        Command::Verify {
            common,
            seed,
            suite,
            inject_fault,
        } => commands::verify(&common, seed, suite, inject_fault),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("kernelmap: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
