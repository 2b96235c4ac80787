use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("events are not sorted by time at position {position}")]
    Unsorted { position: usize },

    #[error("count overflowed 64 bits")]
    Overflow,

    #[error("motif is outside the 6x6 grid: {0}")]
    OutOfGrid(String),

    #[error("edges do not form a motif: {0}")]
    NotAMotif(String),

    #[error("oracle refused: {edges} edges exceeds cap of {cap}")]
    OracleCap { edges: usize, cap: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
