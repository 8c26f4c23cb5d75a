//! `schur-dfs`: command-line front end.
//!
//! Human-readable text goes to stdout; `--out` writes a JSON document that
//! depends only on the inputs (no timings), so repeated runs are
//! byte-identical.

mod commands;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use schur_dfs::blockdiag::DEFAULT_TOL;
use schur_dfs::Error;

#[derive(Parser, Debug)]
#[command(name = "schur-dfs", version, about = "Permutation-symmetric block structure of qudit channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Schur-Weyl sector table of the n-qudit Liouville space.
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct the super-Schur basis and write it to a file.
    SchurBasis {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify a channel spec and report its block structure.
    Analyze {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Blockwise exp(tΓ) of a Lindblad spec.
    Evolve {
        spec: PathBuf,
        /// Comma-separated times.
        #[arg(long = "t", value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
        times: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Compare against the dense exponential.
        #[arg(long)]
        verify_dense: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in invariant suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

/// Command failure with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(String),
    Invariant(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Invariant(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Parse { .. }
            | Error::Io(_)
            | Error::InvalidArgument(_)
            | Error::InvalidParameter { .. }
            | Error::UnknownChannel(_)
            | Error::InvalidPartition { .. }
            | Error::SizeLimit { .. } => Failure::Input(msg),
            Error::InvariantViolation(_)
            | Error::NotHermitian { .. }
            | Error::NotPositiveSemidefinite { .. }
            | Error::StructureViolation { .. } => Failure::Invariant(msg),
            _ => Failure::Internal(msg),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Decompose { n, d, out } => commands::decompose(n, d, out.as_deref()),
        Command::SchurBasis { n, d, out } => commands::schur_basis(n, d, &out),
        Command::Analyze { spec, tol, seed, out } => commands::analyze(&spec, tol, seed, out.as_deref()),
        Command::Evolve { spec, times, tol, verify_dense, out } => {
            commands::evolve(&spec, &times, tol, verify_dense, out.as_deref())
        }
        Command::Verify { level, seed, out } => verify::run(level, seed, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
