use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps `Domain` to exit code 1 and the numerical variants to exit code 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integration exhausted {max_steps} steps at t = {t}")]
    StepLimit { t: f64, max_steps: usize },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("no zero crossing of component {component} in [{t_start}, {t_end}]")]
    NoCrossing {
        component: usize,
        t_start: f64,
        t_end: f64,
    },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("numerical quality failure: {0}")]
    NumericalQuality(String),

    #[error("stability criterion {criterion} disagrees with monodromy verdict {verdict}")]
    CriterionDisagreement {
        criterion: &'static str,
        verdict: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for argument-domain violations, false for numerical failures.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
