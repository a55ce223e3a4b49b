use std::path::PathBuf;

use thiserror::Error;

use crate::cyclo::CycError;
use crate::gf::GfError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Cyclo(#[from] CycError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("grid of {points} points exceeds the cap of {cap}")]
    GridTooLarge { points: u64, cap: u64 },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {msg}", path.display())]
    Format { path: PathBuf, msg: String },
    #[error("invariant breach: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Internal-consistency failures, as opposed to bad input.
    pub fn is_invariant_breach(&self) -> bool {
        matches!(self, Error::Invariant(_) | Error::Field(GfError::Invariant(_)))
    }
}
