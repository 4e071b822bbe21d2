use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nutcracker_cli::{
    cmd_canon, cmd_match, cmd_oracle, cmd_permute, InputFormat, Output, Precision, Settings, Status,
};

/// Canonical numbers and isomorphism correspondences from free-energy
/// encodings.
///
/// Exit status: 0 when every graph or pair succeeds, 1 when any heuristic
/// or numerical step fails, 2 on usage, I/O or parse errors.
#[derive(Debug, Parser)]
#[command(name = "nutcracker", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Input format.
    #[arg(long, value_enum, default_value_t = InputFormat::Graph6)]
    format: InputFormat,
    /// Significant digits for equality of probabilities and canonical numbers.
    #[arg(long, default_value_t = 9)]
    digits: usize,
    /// Coarser digit count at which distinct values are flagged as suspect.
    #[arg(long, default_value_t = 8)]
    suspect_digits: usize,
    /// Arithmetic used by the eigen-solver.
    #[arg(long, value_enum, default_value_t = Precision::Double)]
    precision: Precision,
    /// Power-iteration cap.
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
}

impl From<&Common> for Settings {
    fn from(c: &Common) -> Settings {
        Settings {
            format: c.format,
            digits: c.digits,
            suspect_digits: c.suspect_digits,
            precision: c.precision,
            max_iter: c.max_iter,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the canonical number of every graph and the closest pairs.
    Canon {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Number of nearest pairs to list.
        #[arg(long, default_value_t = 10)]
        nearest: usize,
        /// Print per-graph timings to standard error.
        #[arg(long)]
        timings: bool,
    },
    /// Relabel every graph with a seeded random permutation.
    Permute {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = InputFormat::Graph6)]
        format: InputFormat,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Find a verified correspondence for each pair of graphs, matched by
    /// position in the two files.
    Match {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Decide each pair exactly by exhaustive search (at most 10 nodes).
    Oracle {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = InputFormat::Graph6)]
        format: InputFormat,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Canon {
            input,
            common,
            nearest,
            timings,
        } => cmd_canon(input, &common.into(), *nearest, *timings),
        Command::Permute {
            input,
            format,
            seed,
        } => cmd_permute(input, *format, *seed),
        Command::Match {
            first,
            second,
            common,
        } => cmd_match(first, second, &common.into()),
        Command::Oracle {
            first,
            second,
            format,
        } => cmd_oracle(first, second, *format),
    };
    match result {
        Ok(Output {
            stdout,
            stderr,
            status,
        }) => {
            std::io::stdout().lock().write_all(stdout.as_bytes()).ok();
            std::io::stderr().lock().write_all(stderr.as_bytes()).ok();
            ExitCode::from(status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::Usage as u8)
        }
    }
}
