use thiserror::Error;

/// Errors produced by poset construction, rule evaluation and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("relation contains a cycle through element {0}")]
    Cycle(usize),

    #[error("element id {id} out of range for a poset on {n} elements")]
    ElementOutOfRange { id: usize, n: usize },

    #[error("{what} supports at most {max} elements, got {n}")]
    Size { what: &'static str, n: usize, max: usize },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("invalid parameters: {0}")]
    Spec(String),

    #[error("rule {0} draws private randomness; exact enumeration needs a deterministic rule")]
    RandomRule(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
