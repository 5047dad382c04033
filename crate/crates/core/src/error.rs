use thiserror::Error;

use crate::feasibility::Verdict;
use crate::tour::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid board: {0}")]
    InvalidBoard(String),

    #[error("invalid move parameters ({alpha}, {beta}): {reason}")]
    InvalidMoves {
        alpha: usize,
        beta: usize,
        reason: &'static str,
    },

    #[error("a move set needs at least two axes, got {0}")]
    DimensionTooSmall(usize),

    #[error("coordinate length {found} does not match board dimension {expected}")]
    Shape { expected: usize, found: usize },

    #[error("cell {0:?} lies outside the board")]
    OutOfBounds(Vec<usize>),

    #[error("malformed move vector {0:?}")]
    MalformedMove(Vec<i64>),

    #[error("layer count must be at least {min}, got {got}")]
    InvalidLayers { min: usize, got: usize },

    #[error("tour does not contain the required sites: {0}")]
    MissingSites(String),

    #[error("tours cannot be glued: {0}")]
    NotGluable(String),

    #[error("no seeded 4x{0} extender exists")]
    NoExtender(usize),

    #[error("tour is not seeded: {0}")]
    NotSeeded(String),

    #[error("endpoint mismatch: {0}")]
    Endpoint(String),

    #[error("board is not tourable: {0}")]
    NotTourable(Verdict),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("contradictory search constraints: {0}")]
    Constraint(String),

    #[error("alpha and beta must be coprime, got ({0}, {1})")]
    NotCoprime(usize, usize),

    #[error("tour failed verification: {0}")]
    Verification(Violation),

    #[error("base block unavailable: {0}")]
    Block(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
