use std::fmt;
use std::process::ExitCode;

use dcode_core::Error;

/// Process exit status plus the message printed to stderr.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;
pub const EXIT_INFEASIBLE: u8 = 4;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn config(message: impl fmt::Display) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.to_string(),
        }
    }

    pub fn runtime(message: impl fmt::Display) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code_for(&e),
            message: e.to_string(),
        }
    }
}

/// Input and configuration problems exit 2; everything else is a runtime
/// failure. A failed seed takes the code of its cause. Unreadable input
/// files are mapped at the call site.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::UnsupportedEdgeWeight(_)
        | Error::InvalidInstance(_)
        | Error::InvalidConfig(_)
        | Error::IncompatibleProblem { .. }
        | Error::Json(_)
        | Error::Csv(_) => EXIT_CONFIG,
        Error::Seed { source, .. } => exit_code_for(source),
        _ => EXIT_RUNTIME,
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Loading inputs: a missing or unreadable file is a configuration error.
pub fn input<T>(r: dcode_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        Error::Io { .. } => CliError::config(e),
        other => other.into(),
    })
}
