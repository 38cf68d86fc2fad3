//! Command-line front end for the `lupi` library.
//!
//! [`run`] parses arguments, dispatches to a subcommand and returns the
//! process exit status:
//!
//! | status | meaning                                   |
//! |--------|-------------------------------------------|
//! | 0      | success, or the profile verified as an NE |
//! | 1      | input or usage error                      |
//! | 2      | the profile is not an NE                  |
//! | 3      | the solver did not converge               |

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

mod commands;
pub mod profile;
pub mod render;

use render::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_NASH: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lupi", version, about = "Lowest unique positive integer game analysis")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModelArg {
    Paper,
    Exact,
}

impl From<ModelArg> for lupi::Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Paper => lupi::Model::Paper,
            ModelArg::Exact => lupi::Model::Exact,
        }
    }
}

#[derive(Debug, Args)]
struct FormatArg {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn player_count(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("'{s}' is not a player count"))?;
    if !(lupi::solver::MIN_SOLVER_PLAYERS..=lupi::solver::MAX_SOLVER_PLAYERS).contains(&n) {
        return Err(format!(
            "n must be between {} and {}",
            lupi::solver::MIN_SOLVER_PLAYERS,
            lupi::solver::MAX_SOLVER_PLAYERS
        ));
    }
    Ok(n)
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("'{s}' is not a positive number")),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find a symmetric equilibrium strategy
    Solve {
        #[arg(long, value_parser = player_count)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModelArg::Paper)]
        model: ModelArg,
        /// Residual tolerance (default 1e-12 for paper, 1e-10 for exact)
        #[arg(long, value_parser = positive)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        /// Run every restart and list all distinct roots found
        #[arg(long)]
        all_starts: bool,
        /// Also write the symmetric profile to this file
        #[arg(long)]
        write_profile: Option<PathBuf>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Geometric-strategy payoffs against the rational-player baseline, n = 3..max-n
    Table {
        #[arg(long, default_value_t = 8, value_parser = player_count)]
        max_n: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Check a profile for profitable unilateral deviations
    Verify {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = lupi::DEFAULT_EPSILON, value_parser = positive)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = ModelArg::Exact)]
        model: ModelArg,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Exact expected payoffs of a profile
    Payoff {
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Value of every pure choice against the given opponents
    BestResponse {
        #[arg(long, value_parser = player_count)]
        n: usize,
        /// n-1 comma-separated opponent strategies
        #[arg(long, num_args = 1.., required = true)]
        others: Vec<String>,
        #[arg(long, value_enum, default_value_t = ModelArg::Exact)]
        model: ModelArg,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Geometric approximate strategy and its payoff
    Approx {
        #[arg(long, value_parser = player_count)]
        n: usize,
        #[arg(long)]
        write_profile: Option<PathBuf>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Simulate independent rounds of a profile
    Simulate {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        format: FormatArg,
    },
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    match commands::dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_INPUT
        }
    }
}
