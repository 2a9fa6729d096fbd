use std::path::PathBuf;

use thiserror::Error;
use timed_learn_core::learn::LearnError;
use timed_learn_core::{AutomatonError, ParseError};

use crate::dot::DotError;
use crate::guard::GuardError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid automaton file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Guard(#[from] GuardError),
    #[error(transparent)]
    Dot(#[from] DotError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Learn(#[from] LearnError),
}

impl CliError {
    /// 3 for exhausted caps, 1 for a learner that gave up, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Learn(LearnError::CapExceeded { .. }) => 3,
            CliError::Learn(LearnError::Exhausted | LearnError::NoProgress(_)) => 1,
            _ => 2,
        }
    }
}
