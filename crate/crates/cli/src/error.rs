use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for a successful run.
pub const EXIT_OK: u8 = 0;
/// Bad input: arguments, files or parameters.
pub const EXIT_VALIDATION: u8 = 1;
/// A numerical routine failed on valid input.
pub const EXIT_NUMERICAL: u8 = 2;
/// The inequality battery recorded a violation.
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] blockcoh::Error),

    #[error("inequality battery recorded {0} violation(s)")]
    Violations(usize),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, e: &serde_json::Error) -> Self {
        CliError::Parse {
            path: path.into(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        use blockcoh::Error as E;
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => EXIT_VALIDATION,
            CliError::Violations(_) => EXIT_VIOLATION,
            CliError::Core(e) => match e {
                E::OptimizationFailed(_)
                | E::PenaltyNotConverged { .. }
                | E::VanishingTrace { .. }
                | E::IntegratorUnstable { .. } => EXIT_NUMERICAL,
                _ => EXIT_VALIDATION,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
