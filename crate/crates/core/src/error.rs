use thiserror::Error;

use crate::integral::EvalResult;
use crate::quadrature::QuadEstimate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested function has a pole at the given point.
    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: String },

    /// An evaluator could not reach its tolerance target; `best` carries the
    /// partial value together with its honest error estimate.
    #[error("accuracy target not met: {reason}")]
    Accuracy {
        reason: String,
        best: Box<EvalResult>,
    },

    /// Quadrature ran out of refinement levels before the level-to-level
    /// difference dropped below the target.
    #[error("quadrature did not converge within {levels} levels")]
    QuadratureNotConverged {
        levels: u32,
        best: Vec<QuadEstimate>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Best available evaluation carried by an accuracy error, if any.
    pub fn best_estimate(&self) -> Option<&EvalResult> {
        match self {
            Error::Accuracy { best, .. } => Some(best),
            _ => None,
        }
    }
}
