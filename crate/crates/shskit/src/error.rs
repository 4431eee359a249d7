//! Error taxonomy shared by the whole crate.
//!
//! The split between [`Error::Domain`], [`Error::Obstruction`] and
//! [`Error::Numerical`] is load-bearing: callers (notably the CLI) use it
//! to distinguish "you asked a malformed question" from "the mathematics
//! says no" from "the numerics gave up".

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad input: out-of-range parameter, mismatched intervals, etc.
    #[error("domain error: {0}")]
    Domain(String),

    /// A genuine mathematical obstruction (winding mismatch, boundary
    /// pairing mismatch, non-synthesizable configuration, ...).
    #[error("obstruction: {0}")]
    Obstruction(String),

    /// Numerical failure: quadrature did not converge, grid refinement
    /// exhausted, ill-conditioned linear solve, ...
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn obstruction(msg: impl Into<String>) -> Self {
        Error::Obstruction(msg.into())
    }
    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
