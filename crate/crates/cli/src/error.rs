use std::path::PathBuf;

use afav_core::error::{EngineError, OracleError};
use thiserror::Error;

/// Everything that can stop a command before it reaches a decision.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] afav_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("gadget `{0}` disagrees with its closed form")]
    GadgetMismatch(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status; 0–2 are reserved for decisions and 3 for usage.
    pub fn exit_code(&self) -> i32 {
        use afav_core::Error as E;
        match self {
            CliError::Core(E::Parameter(_) | E::Scalar(_) | E::Affine(_)) => 4,
            CliError::Core(E::Format(_) | E::Serialization(_)) => 5,
            CliError::Core(E::Engine(
                EngineError::InvalidInput { .. } | EngineError::MissingTransition { .. },
            ))
            | CliError::Core(E::Oracle(
                OracleError::InvalidInput(_) | OracleError::MissingTransition { .. },
            )) => 6,
            CliError::Core(E::Engine(EngineError::Budget { .. }))
            | CliError::Core(E::Oracle(OracleError::Budget { .. } | OracleError::TooManyBlocks { .. })) => 7,
            CliError::Io { .. } => 8,
            CliError::Core(E::Engine(EngineError::Invariant { .. } | EngineError::BadChoice(_)))
            | CliError::GadgetMismatch(_) => 9,
        }
    }
}

/// Lifts any core error type.
pub fn core(e: impl Into<afav_core::Error>) -> CliError {
    CliError::Core(e.into())
}
