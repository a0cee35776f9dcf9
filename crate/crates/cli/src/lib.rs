//! Command-line front end: scenario configs in, tables and structured
//! reports out.

pub mod commands;
pub mod config;
pub mod report;
pub mod tables;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{execute, run, Outcome};
pub use config::{OutputFormat, ScenarioConfig};
pub use report::Report;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NOT_OVERDEFINED: u8 = 3;
pub const EXIT_ATTACK: u8 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn attack(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_ATTACK,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<gfsga_core::Error> for CliError {
    fn from(e: gfsga_core::Error) -> Self {
        use gfsga_core::Error::*;
        let code = match e {
            NotOverdefined { .. } => EXIT_NOT_OVERDEFINED,
            Keystream(_) => EXIT_ATTACK,
            InvalidArgument(_) | Feasibility(_) | SearchExhausted { .. } | Io(_) => EXIT_CONFIG,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gfsga",
    version,
    about = "Guess-and-determine analysis of filter generators"
)]
pub struct Cli {
    /// Scenario config (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for attacks.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Repetition profile and cost estimate for the configured mode.
    Analyze,
    /// Search for tap differences that resist the attack.
    Optimize,
    /// Recover the initial state from a keystream file.
    Attack,
    /// Recompute a shipped table and compare with the published values.
    Report {
        /// Fixture id, or "all".
        fixture: String,
    },
    /// Write the keystream of the configured generator to a file.
    Simulate {
        #[arg(long)]
        keystream: PathBuf,
        /// Initial state as hex; random from the seed when absent.
        #[arg(long)]
        state: Option<String>,
        /// Number of keystream blocks; twice the state length by default.
        #[arg(long)]
        blocks: Option<usize>,
    },
}
