use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("collision between vortices {0} and {1}")]
    Collision(usize, usize),

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("degenerate polynomial: {0}")]
    DegeneratePolynomial(String),

    #[error("no candidate extends x3 = {x3} to a full solution at m = {m}")]
    Inconsistent { x3: f64, m: f64 },

    #[error("{count} candidates extend x3 = {x3} at m = {m}")]
    Ambiguous { x3: f64, m: f64, count: usize },

    #[error("iteration failed to converge: {0}")]
    NonConvergence(String),

    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
