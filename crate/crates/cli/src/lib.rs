//! Command-line front end: argument parsing, file formats and reports.

pub mod commands;
pub mod input;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use input::{dump_matrix, parse_angle, parse_matrix, parse_matrix_file};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("line {line}: expected a header \"n l\" matching the rows that follow")]
    MalformedHeader { line: usize },
    #[error("line {line}: row has {found} bits, expected {expected}")]
    BadRowLength { line: usize, expected: usize, found: usize },
    #[error("line {line}, column {column}: unexpected character {found:?}")]
    BadCharacter { line: usize, column: usize, found: char },
    #[error("bad angle {0:?}: use \"a/b\" for (a/b)*pi or \"rad:<value>\"")]
    BadAngle(String),
    #[error("{0}")]
    BadArgument(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] iqp_matroid::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_budget() => 3,
            CliError::Core(iqp_matroid::Error::NumericalInconsistency(_)) => 4,
            _ => 2,
        }
    }

    pub fn kind(&self) -> String {
        let name = match self {
            CliError::MalformedHeader { .. } => "MalformedHeader",
            CliError::BadRowLength { .. } => "BadRowLength",
            CliError::BadCharacter { .. } => "BadCharacter",
            CliError::BadAngle(_) => "BadAngle",
            CliError::BadArgument(_) => "BadArgument",
            CliError::Io(_) => "Io",
            CliError::Core(e) => return format!("{e:?}").split([' ', '(', '{']).next().unwrap_or("Error").to_string(),
        };
        name.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MarginalPath {
    Auto,
    Generic,
    Pi8,
    Sparse,
    Graphic,
}

#[derive(Debug, Parser)]
#[command(name = "iqp", version, about = "Output distributions of X-programs (IQP circuits)")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub output: OutputFormat,
    /// Worker threads for parallel loops (0 = all cores).
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,
    /// Print the parsed matrix in file format instead of running the command.
    #[arg(long, global = true)]
    pub dump: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct MatrixArg {
    /// Matrix file: header "n l" then n rows of l bits.
    #[arg(long, short = 'm')]
    pub matrix: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ProgramArgs {
    #[command(flatten)]
    pub matrix: MatrixArg,
    /// Angle as "a/b" (times pi) or "rad:<value>".
    #[arg(long, short = 't', allow_hyphen_values = true)]
    pub theta: String,
}

#[derive(Debug, Clone, Args)]
pub struct MaskArgs {
    /// Bits to keep, e.g. 0110 keeps bits 1 and 2.
    #[arg(long, conflicts_with = "projector")]
    pub mask: Option<String>,
    /// File holding an idempotent l x l matrix M acting as x -> M x.
    #[arg(long)]
    pub projector: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weight enumerator of the column code.
    Wenum(MatrixArg),
    /// Tutte polynomial of the row matroid, or its value at a point.
    Tutte {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Evaluate at x = a+bi, y = c+di, given as "a,b,c,d".
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// The amplitude at zero, alpha(P, theta).
    Alpha(ProgramArgs),
    /// Amplitude <x| exp(i theta H_P) |0>.
    Amplitude {
        #[command(flatten)]
        program: ProgramArgs,
        #[arg(long)]
        x: String,
    },
    /// Probability of outcome x.
    Prob {
        #[command(flatten)]
        program: ProgramArgs,
        #[arg(long)]
        x: String,
    },
    /// Correlation coefficient beta_s.
    Beta {
        #[command(flatten)]
        program: ProgramArgs,
        #[arg(long)]
        s: String,
    },
    /// The full output distribution.
    Dist(ProgramArgs),
    /// Exact support and probabilities at theta = pi/4.
    Clifford(MatrixArg),
    /// Marginal distribution under a mask or projector.
    Marginal {
        #[command(flatten)]
        program: ProgramArgs,
        #[command(flatten)]
        mask: MaskArgs,
        #[arg(long, value_enum, default_value = "auto")]
        path: MarginalPath,
        /// Column-weight bound for the sparse path (default: the largest column weight).
        #[arg(long)]
        column_bound: Option<usize>,
    },
    /// Samples of a marginal.
    Sample {
        #[command(flatten)]
        program: ProgramArgs,
        #[command(flatten)]
        mask: MaskArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Equivalent program with at most d ones per row, for theta = c pi / 2^d.
    Reduce(ProgramArgs),
    /// Cross-check every fast path against the brute-force oracle.
    Verify(ProgramArgs),
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the exit code and the text for stdout.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            let err = CliError::BadArgument(e.to_string().trim().to_string());
            return (2, report::error_json(&err));
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> (i32, String) {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool,
        Err(e) => return (2, report::error_json(&CliError::BadArgument(e.to_string()))),
    };
    match pool.install(|| commands::execute(cli)) {
        Ok(out) => out,
        Err(e) => (e.exit_code(), report::error_json(&e)),
    }
}
