use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Antenna counts or mode counts outside their admissible range.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// An operation was called outside the domain where it is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A random draw landed on (or numerically near) a measure-zero bad set.
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
    /// A broken internal invariant, e.g. an unbounded polytope.
    #[error("internal error: {0}")]
    Internal(String),
    /// Malformed textual input (rationals, JSON, CSV).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
