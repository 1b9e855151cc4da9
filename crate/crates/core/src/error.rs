use thiserror::Error;

use crate::base::Vector;

/// Errors raised by gaugekit operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: dimension mismatches, empty inputs, bad parameters.
    #[error("input error: {0}")]
    Input(String),

    /// The caller broke an operation's precondition (e.g. a gauge of a set
    /// that is not flagged star-shaped).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Evaluation left the domain of an expression (negative square root,
    /// division by zero, non-finite power).
    #[error("domain error in `{term}`: {message}")]
    Domain { term: String, message: String },

    /// A value-level precondition failed while building an object.
    #[error("construction error: {0}")]
    Construction(String),

    /// The norm vanishes (or is negative) along a nonzero direction.
    #[error("point separation fails along direction {direction}")]
    PointSeparation { direction: Vector },

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
