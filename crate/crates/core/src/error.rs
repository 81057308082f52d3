use thiserror::Error;

use crate::rational::ParseRationalError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("channel matrix must be square with K >= 1 (row {row} has {len} entries, expected {expected})")]
    NonSquare { row: usize, len: usize, expected: usize },
    #[error("user {0} has no direct link (alpha[{0}][{0}] <= 0)")]
    ZeroDirectLink(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("stream {stream} of user {user} has positive power exponent {value}")]
    PositivePowerExponent { user: usize, stream: usize, value: String },
    #[error("stream {stream} of user {user} has an all-zero beamforming vector")]
    EmptyVector { user: usize, stream: usize },
    #[error("user index {user} out of range for K = {k}")]
    UserOutOfRange { user: usize, k: usize },
    #[error("decomposition map does not match the channel's cross links: {0}")]
    MapMismatch(String),
    #[error("time-sharing weights invalid: {0}")]
    WeightMismatch(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("TIN target is infeasible")]
    InfeasibleTin,
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
    #[error("malformed document: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
