use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{line}:{column}: {message}")]
    Validation {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("truth-table cap exceeded: {count} atoms (limit {limit})")]
    AtomCap { count: usize, limit: usize },

    #[error("premise cap exceeded: {count} premises (limit {limit})")]
    PremiseCap { count: usize, limit: usize },

    #[error(
        "enumeration cap exceeded: {count} arguments (limit {limit}) and search fallback disabled"
    )]
    NodeCap { count: usize, limit: usize },

    #[error("missing priority value for {0}")]
    MissingValue(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
