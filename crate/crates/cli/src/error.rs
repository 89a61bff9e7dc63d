use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Core(#[from] reflectode::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    /// 2: bad input, 3: resonance or hypothesis violated, 4: quadrature,
    /// 1: anything else.
    pub fn exit_code(&self) -> i32 {
        use reflectode::Error as E;
        match self {
            CliError::Schema(_) => 2,
            CliError::Core(e) => match e {
                E::Parse(_) | E::Eval(_) | E::InvalidProblem(_) | E::BoundaryViolation(_) => 2,
                E::Domain(_) | E::Resonance(_) | E::FunctionalResonance { .. } | E::Orientation { .. } => 3,
                E::Quad(_) => 4,
                _ => 1,
            },
            CliError::Io(_) | CliError::Json(_) | CliError::ChecksFailed { .. } => 1,
        }
    }
}
