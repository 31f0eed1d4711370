use thiserror::Error;

/// Errors raised by the bimatrix algebra, analysis and design routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("{0} is singular (reciprocal condition {1:.3e})")]
    Singular(&'static str, f64),

    #[error("eigenvalue computation did not converge")]
    EigenNonConvergence,

    #[error("spectrum is not closed under conjugation: {0}")]
    NotConjugateClosed(String),

    #[error("Lyapunov operator has no unique solution: {0}")]
    NoUniqueSolution(String),

    #[error("system is not controllable (smallest PBH margin {0:.3e})")]
    Uncontrollable(f64),

    #[error("system is not stabilizable (smallest PBH margin {0:.3e})")]
    NotStabilizable(f64),

    #[error("system is not observable (smallest PBH margin {0:.3e})")]
    Unobservable(f64),

    #[error("system is not detectable (smallest PBH margin {0:.3e})")]
    NotDetectable(f64),

    #[error("weight {0} is not positive definite")]
    IndefiniteWeight(&'static str),

    #[error("{method} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(context: &'static str, expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// True for structural infeasibility (uncontrollable, unstabilizable, ...),
    /// as opposed to I/O or numerical failure.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::Uncontrollable(_)
                | Error::NotStabilizable(_)
                | Error::Unobservable(_)
                | Error::NotDetectable(_)
        )
    }
}
