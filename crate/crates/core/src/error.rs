//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A structural parameter is outside its allowed range.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A mathematically undefined evaluation (division by zero and friends).
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// The (Q, T_s, M) measurement triple violates one of the joint
    /// probability constraints; the message names the violated one.
    #[error("inconsistent measurement triple: {constraint}")]
    Infeasible { constraint: String },

    /// A correlation was requested on a channel with no events.
    #[error("no events on channel `{0}`")]
    EmptyChannel(&'static str),

    /// Histogram binning that does not tile the lag range.
    #[error("invalid binning: {0}")]
    Binning(String),

    /// Least-squares fit ran out of iterations; carries the last iterate.
    #[error(
        "fit did not converge after {iterations} iterations \
         (A={amplitude:.6e}, tau_neg={tau_neg:.6e}, tau_pos={tau_pos:.6e}, \
         residual={residual:.6e})"
    )]
    FitDiverged {
        iterations: usize,
        amplitude: f64,
        tau_neg: f64,
        tau_pos: f64,
        residual: f64,
    },

    /// Malformed text input (click-stream CSV, metadata, config files).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}
