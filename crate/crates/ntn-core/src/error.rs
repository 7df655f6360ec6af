//! Error type shared across the crate.

use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors reported by geometry, distribution, and Monte Carlo routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the mathematical domain of the operation.
    Domain {
        what: &'static str,
        value: f64,
    },
    /// A series or iteration failed to converge within its budget.
    NonConvergence {
        what: &'static str,
        terms: u32,
    },
    /// An operation was invoked with inputs that violate its contract
    /// (e.g. closed-form topology statistics on a non-homogeneous-BPP spec).
    Contract(&'static str),
    /// A configuration cannot produce a meaningful estimate
    /// (e.g. random association when no platform can ever be visible).
    Config(&'static str),
    /// An empirical estimator was handed an empty sample.
    EmptySample,
    /// A sweep point failed; carries the grid index and the underlying error.
    Sweep {
        index: usize,
        source: alloc::boxed::Box<Error>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::NonConvergence { what, terms } => {
                write!(f, "no convergence: {what} after {terms} terms")
            }
            Error::Contract(what) => write!(f, "contract violation: {what}"),
            Error::Config(what) => write!(f, "invalid configuration: {what}"),
            Error::EmptySample => write!(f, "empty sample"),
            Error::Sweep { index, source } => write!(f, "sweep point {index}: {source}"),
        }
    }
}

impl core::error::Error for Error {}
