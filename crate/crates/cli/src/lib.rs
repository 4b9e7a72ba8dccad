//! Command-line orchestration for `lpfsieve-core`.
//!
//! [`run`] parses an argument vector, executes one subcommand and writes a
//! JSON envelope (or its CSV / table rendering). Exit codes: `0` success,
//! `1` a verification check failed or a computation could not complete,
//! `2` usage or domain error.

// Negated comparisons are used on purpose so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lpfsieve_core::{Error, ThetaExponent};

mod commands;
pub mod output;

use output::{envelope, render, Format};

#[derive(Debug, Parser)]
#[command(name = "lpfsieve", version, about = "Sieve budget for the largest prime factor of n^2 + 1")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Spectral exponent as an exact rational, e.g. 7/64 or 0.
    #[arg(long, global = true, default_value = "7/64")]
    pub theta: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct GridOpts {
    /// Initial cells along the outer axis.
    #[arg(long)]
    pub grid_outer: Option<usize>,
    /// Maximum bisection depth of the adaptive rule.
    #[arg(long)]
    pub grid_depth: Option<u32>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Buchstab function and its envelopes.
    Omega {
        values: Vec<f64>,
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Evenly spaced points on a:b (see --points).
        #[arg(long)]
        range: Option<String>,
        #[arg(long, default_value_t = 11)]
        points: usize,
    },
    /// Linear sieve functions F and f.
    SieveFn {
        values: Vec<f64>,
        #[arg(long)]
        range: Option<String>,
        #[arg(long, default_value_t = 11)]
        points: usize,
    },
    /// Exact exponents at P = x^alpha.
    Exponents {
        /// Rational alpha values, e.g. 6/5.
        #[arg(long, required = true)]
        alpha: Vec<String>,
    },
    /// Case breakpoints a1..a4.
    Breakpoints,
    /// Deficiency integrals.
    Deficiency {
        /// A single term (G1..G6, F1..F6 or T1..T6); all six by default.
        #[arg(long)]
        term: Option<String>,
        #[command(flatten)]
        grid: GridOpts,
    },
    /// Budget ledger and the solved exponent.
    Optimize {
        /// Also report the total at this exponent.
        #[arg(long)]
        varpi: Option<f64>,
        #[command(flatten)]
        grid: GridOpts,
    },
    /// Arithmetic and numerical verification suites.
    Verify {
        /// rho, multiplicativity, gauss, weil, gcd-sum, chebyshev, poisson,
        /// identity, envelopes, breakpoints or all (repeatable).
        #[arg(long, default_value = "all", value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        max_ell: u64,
        #[arg(long, default_value_t = 10_000)]
        max_m: u64,
        #[arg(long, default_value_t = 500)]
        c_max: u64,
        #[arg(long, default_value_t = 100_000)]
        x: u64,
        #[arg(long, default_value_t = 1000)]
        max_d: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Largest prime factor of n^2 + 1 over a range.
    ScanLpf {
        /// Integer range lo:hi (inclusive).
        #[arg(long)]
        range: String,
        /// One row per n instead of dyadic summaries.
        #[arg(long)]
        records: bool,
    },
    /// Direct versus Poisson evaluation of |A_d|.
    PoissonCheck {
        #[arg(long, default_value_t = 100_000)]
        x: u64,
        #[arg(long, default_value_t = 1000)]
        max_d: u64,
        #[arg(long, default_value_t = lpfsieve_core::arithmetic::poisson::DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Empirical bilinear (Type II) sums against their main term.
    Type2Check {
        #[arg(long, default_value_t = 100_000)]
        x: u64,
        #[arg(long, default_value_t = 30)]
        m: u64,
        #[arg(long, default_value_t = 30)]
        n: u64,
        /// Coefficients b_n: `ones` or `primes-1-mod-4`.
        #[arg(long, default_value = "primes-1-mod-4")]
        coeffs: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Omega { .. } => "omega",
            Command::SieveFn { .. } => "sieve-fn",
            Command::Exponents { .. } => "exponents",
            Command::Breakpoints => "breakpoints",
            Command::Deficiency { .. } => "deficiency",
            Command::Optimize { .. } => "optimize",
            Command::Verify { .. } => "verify",
            Command::ScanLpf { .. } => "scan-lpf",
            Command::PoissonCheck { .. } => "poisson-check",
            Command::Type2Check { .. } => "type2-check",
        }
    }
}

/// Failure classes, mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(format!("{e:#}"))
    }
}

fn execute(cli: &Cli) -> Result<bool, Failure> {
    let theta: ThetaExponent = cli.global.theta.parse()?;
    let outcome = match cli.global.jobs {
        Some(0) => return Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Runtime(e.to_string()))?
            .install(|| commands::dispatch(&cli.command, theta))?,
        None => commands::dispatch(&cli.command, theta)?,
    };
    let env = envelope(cli.command.name(), &theta.to_string(), &outcome);
    let text = render(&env, cli.global.format)?;
    match &cli.global.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Runtime(e.to_string()))?;
        }
    }
    Ok(!outcome.failed())
}

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code.
pub fn run<S: AsRef<str>>(argv: &[S]) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("error: verification failed");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}
