use thiserror::Error;

use crate::states::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {func} is undefined at {at}")]
    Pole { func: &'static str, at: f64 },

    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("series did not converge after {terms} terms (tail estimate {tail:e})")]
    NonConvergence { terms: usize, tail: f64 },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(Violation),

    #[error("point outside the convergence domain: {0}")]
    OutsideDomain(String),

    #[error("tail bound {bound:e} above tolerance {tol:e} at cutoff cap {cap}")]
    TailBound { bound: f64, tol: f64, cap: usize },

    #[error("cutoff {requested} exceeds cap {cap}")]
    CutoffCap { requested: usize, cap: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("no resolution of unity on the unit circle: {0}")]
    CircleRefusal(String),

    #[error("{0}")]
    Invalid(String),
}
