use thiserror::Error;

/// Errors produced by the analysis library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation (e.g. a non-positive frequency).
    #[error("domain error: {0}")]
    Domain(String),

    /// Operands have incompatible lengths or shapes.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// Chords or rhythms with different numbers of elements.
    #[error("cardinality mismatch: {left} vs {right}")]
    Cardinality { left: usize, right: usize },

    /// Malformed Standard MIDI File.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A selection or extraction produced nothing to analyse.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// Invalid configuration (metric/payload mismatch, non-prime field, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A query value outside the range a structure was built for.
    #[error("out of range: {0}")]
    Range(String),

    /// Input too large for a dense computation.
    #[error("size limit exceeded: {size} > {limit}")]
    Size { size: usize, limit: usize },

    /// Malformed distance-matrix text.
    #[error("matrix format error on line {line}: {message}")]
    MatrixFormat { line: usize, message: String },

    /// Requested a space outside the curated topology tables.
    #[error("unsupported space: {0}")]
    Lookup(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
