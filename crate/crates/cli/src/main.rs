//! `hcolour`: exact hard-core computations, occupancy certificates, bound
//! formulas and correspondence colouring from the command line.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 a bounded run that gave up
//! (the report is still written), 3 a cap or regime error.

mod commands;
mod lists;
mod output;

use clap::{Args, Parser, Subcommand};
use output::Format;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hcolour", version, about = "Hard-core model tools for colouring locally sparse graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct Common {
    /// RNG seed; echoed into every output.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Independence polynomial, Z(λ), Z'(λ) and the occupancy fraction.
    Ipoly(commands::IpolyArgs),
    /// Verify or search local occupancy parameters.
    Occupancy(commands::OccupancyArgs),
    /// Evaluate an occupancy lower bound or a colour budget.
    Bounds(commands::BoundsArgs),
    /// Run the two-phase correspondence colouring.
    Colour(commands::ColourArgs),
    /// Generate a graph file.
    Gen(commands::GenArgs),
    /// Iterated random bipartition.
    Split(commands::SplitArgs),
}

pub enum CliError {
    Usage(String),
    /// The rendered output still goes to the usual destination.
    Failure(String),
    Cap(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failure(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Ipoly(a) => commands::ipoly(a),
        Command::Occupancy(a) => commands::occupancy(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Colour(a) => commands::colour(a),
        Command::Gen(a) => commands::gen(a),
        Command::Split(a) => commands::split(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) | CliError::Cap(m) => eprintln!("error: {m}"),
                CliError::Failure(m) => eprintln!("failure: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}
