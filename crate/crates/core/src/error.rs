use thiserror::Error;

use crate::numerics::ComplexPoint;

/// Failures raised by the numeric and symbolic evaluators.
///
/// Every variant maps onto one of the CLI's structured error kinds, see
/// [`Error::kind`].
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at {location}: {detail}")]
    Pole { location: String, detail: String },

    #[error("range error: {0}")]
    Range(String),

    #[error("series did not converge after {terms} terms (best value {best})")]
    Convergence { terms: usize, best: ComplexPoint },

    #[error("prefactor 1 - 2^(1-s) vanishes near {center}; s lies inside the exclusion disk")]
    PrefactorSingularity { center: ComplexPoint },

    #[error("refinement did not converge: {0}")]
    NoConvergence(String),

    #[error("identity check failed: {0}")]
    Assertion(String),

    #[error("invalid precision context: {0}")]
    Precision(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Pole { .. } => "pole",
            Error::Range(_) => "range",
            Error::Convergence { .. } => "convergence",
            Error::PrefactorSingularity { .. } => "prefactor_singularity",
            Error::NoConvergence(_) => "no_convergence",
            Error::Assertion(_) => "assertion",
            Error::Precision(_) => "precision",
            Error::Parse(_) => "parse",
        }
    }

    pub(crate) fn pole(location: impl std::fmt::Display, detail: impl Into<String>) -> Self {
        Error::Pole {
            location: location.to_string(),
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
