use num_complex::Complex64;
use thiserror::Error;

use crate::types::EvalResult;

pub type Result<T> = std::result::Result<T, HlzError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HlzError {
    /// Arguments outside the region where the requested representation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set or configuration that violates its own invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gamma function pole at {0}")]
    Pole(Complex64),

    /// The series hit its truncation cap. The partial result is kept so callers
    /// can still report the last observed tail bound.
    #[error("series did not converge after {} terms (tail estimate {:.3e})", .0.work, .0.abs_err)]
    NoConvergence(Box<EvalResult>),

    #[error("quadrature did not reach tolerance after {levels} refinement levels (error estimate {estimate:.3e})")]
    QuadratureFailure { levels: usize, estimate: f64 },

    #[error("tail bound unavailable: majorant ratio {0} is not below 1")]
    TailBoundUnavailable(f64),
}

impl HlzError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        HlzError::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        HlzError::InvalidParameter(msg.into())
    }

    /// Short machine-readable kind, used by the CLI's error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            HlzError::Domain(_) => "domain",
            HlzError::InvalidParameter(_) => "invalid-parameter",
            HlzError::Pole(_) => "pole",
            HlzError::NoConvergence(_) => "no-convergence",
            HlzError::QuadratureFailure { .. } => "quadrature-failure",
            HlzError::TailBoundUnavailable(_) => "tail-bound-unavailable",
        }
    }
}
