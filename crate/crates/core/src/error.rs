use thiserror::Error;

/// Errors produced by the matrix, coding and experiment routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular (rank {rank} < {k})")]
    Singular { rank: usize, k: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("row {row}: no rank-increasing row found after {attempts} attempts")]
    Generation { row: usize, attempts: usize },

    #[error("matrix order exceeds cap {cap}")]
    OrderCap { cap: u64 },

    #[error("cycle decode failed verification: re-encoding does not reproduce the input")]
    Verify,

    #[error("k = {k} exceeds the permutation cap {cap}")]
    Cap { k: usize, cap: usize },

    #[error("group axiom `{axiom}` violated: {witness}")]
    GroupAxiom { axiom: &'static str, witness: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
