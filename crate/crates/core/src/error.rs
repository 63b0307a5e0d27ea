use thiserror::Error;

/// Errors raised while building or querying presentations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("automaton size limit exceeded: {states} states (limit {limit}, set INFGRAPH_MAX_STATES to raise it)")]
    StateLimit { states: usize, limit: usize },

    #[error("unsupported construction: {0}")]
    Unsupported(String),

    #[error("malformed presentation file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
