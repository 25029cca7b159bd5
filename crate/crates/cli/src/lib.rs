//! Library half of the `pt-eta` command-line tool.
//!
//! Each command is split into a pure computation (testable without a
//! process) and a thin runner that merges configuration and writes output.

pub mod args;
pub mod config;
pub mod dilate;
pub mod equivalence;
pub mod output;
pub mod sweep;
pub mod verify;

use thiserror::Error;

pub use args::{run, Cli, Command};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INVARIANT_FAILURE: i32 = 1;
    pub const INVALID_INPUT: i32 = 2;
    pub const IO_ERROR: i32 = 3;
    pub const INFEASIBLE: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => exit::INVALID_INPUT,
            CliError::Io(_) => exit::IO_ERROR,
            CliError::Infeasible(_) => exit::INFEASIBLE,
            CliError::Invariant(_) => exit::INVARIANT_FAILURE,
        }
    }
}
