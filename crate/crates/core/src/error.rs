use thiserror::Error;

use crate::expr::{EvalError, ParseError};
use crate::quad::QuadError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resonance: {0}")]
    Resonance(String),

    #[error(
        "functional resonance: F(cos mt) = F(sin mt) (gap {gap:e}, need |gap| > {eps:e}); the functional problem has no unique solution"
    )]
    FunctionalResonance { gap: f64, eps: f64 },

    #[error("orientation: positivity constants need F(cos mt) > F(sin mt), got gap {gap:e}")]
    Orientation { gap: f64 },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("boundary condition not satisfied: {0}")]
    BoundaryViolation(String),

    #[error("positivity certificate contradicted: c = {c} certified but grid minimum of u is {min_u:e}")]
    CertificateContradicted { c: f64, min_u: f64 },

    #[error("inconclusive comparison: {0}")]
    Inconclusive(String),

    #[error("threshold search failed: {0}")]
    ThresholdSearch(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error(transparent)]
    Quad(#[from] QuadError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
