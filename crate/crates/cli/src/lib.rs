//! Command-line harness for `mincomp`.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code, so the binary and the tests share a single entry point.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | internal failure (geometry violation, broken stdout) |
//! | 2 | configuration error |
//! | 3 | integer overflow guard tripped |
//! | 4 | empty sample |
//! | 5 | `Re(s) <= 1` for a series |
//! | 6 | output path not writable |

mod commands;
pub mod doc;
mod fmt;
mod report;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mincomp::enumerate::DEFAULT_CHUNK;

pub use commands::{parse_m_list, read_samples_csv, stats_from_values};
pub use fmt::g17;

pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const OVERFLOW: i32 = 3;
    pub const EMPTY: i32 = 4;
    pub const DOMAIN: i32 = 5;
    pub const OUTPUT: i32 = 6;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] mincomp::Error),

    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: io::Error },

    #[error("write failed: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use mincomp::Error as E;
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Output { .. } => exit::OUTPUT,
            CliError::Io(_) => exit::INTERNAL,
            CliError::Core(e) => match e {
                E::OverflowGuard { .. } => exit::OVERFLOW,
                E::EmptySample => exit::EMPTY,
                E::ConvergenceDomain { .. } => exit::DOMAIN,
                E::GeometryViolation { .. } => exit::INTERNAL,
                _ => exit::CONFIG,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "mincomp", version, about = "Minimal basis completions of planar lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit every ±-class of primitive vectors with its minimal completion.
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bound: BoundArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Discrepancy, Weyl sums, histogram and count check for the least skewness.
    Stats {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bound: BoundArgs,
        #[command(flatten)]
        stats: StatsArgs,
        /// Read samples from an `enumerate` CSV instead of enumerating.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Weyl sums of the least skewness only.
    Weyl {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bound: BoundArgs,
        /// Frequencies, e.g. `1,2,3` or `1..5`.
        #[arg(long, default_value = "1..5", allow_hyphen_values = true)]
        m_list: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// `ε · N(ε)` over a decreasing grid of heights.
    OrbitCount {
        #[command(flatten)]
        common: Common,
        /// Strictly decreasing heights.
        #[arg(long, default_value = "1e-2,5e-3,2e-3,1e-3,5e-4,2e-4,1e-4")]
        eps_grid: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Truncated series `V_m(z, s)`, optionally with a Laplacian check.
    Series {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        m: i64,
        /// `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 1000.0)]
        trunc: f64,
        #[arg(long)]
        laplacian_check: bool,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Histogram SVG, discrepancy-vs-T CSV and Markdown summary in `--out`.
    Report {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bound: BoundArgs,
        #[command(flatten)]
        stats: StatsArgs,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Lattice point `x,y` for z = x + iy. Exact arithmetic is used when x and x²+y² are rational.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub z: String,
    /// Worker threads (default: available parallelism). Output does not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Rows of `c` per work unit.
    #[arg(long, default_value_t = DEFAULT_CHUNK)]
    pub chunk: u64,
    /// Output file (a directory for `report`); standard output otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct BoundArgs {
    /// Keep |v| <= T.
    #[arg(long, value_name = "T", allow_negative_numbers = true)]
    pub max_norm: Option<f64>,
    /// Keep Im(γz) > ε.
    #[arg(long, value_name = "EPS", allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Frequencies, e.g. `1,2,3` or `1..5`.
    #[arg(long, default_value = "1..5", allow_hyphen_values = true)]
    pub m_list: String,
    /// Histogram bins over (-1/2, 1/2], at least 2.
    #[arg(long, default_value_t = 50, allow_negative_numbers = true)]
    pub bins: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Runs one command line. `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{e}");
            return e.exit_code();
        }
    };
    let outcome = commands::dispatch(cli.command, stdout).and_then(|()| stdout.flush().map_err(CliError::from));
    match outcome {
        Ok(()) => exit::OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
