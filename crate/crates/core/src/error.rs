use thiserror::Error;

/// Errors produced by the numerics library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates a domain invariant.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested evaluation sits on a kernel singularity.
    #[error("singular input: {0}")]
    SingularInput(String),

    /// A sum, quadrature or extrapolation did not reach its tolerance.
    #[error("non-convergence in {what}: estimated error {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    NonConvergence {
        what: String,
        estimate: f64,
        tolerance: f64,
    },

    /// A fixed step count is too coarse for the integrator's local error budget.
    #[error("step size too large: local error estimate {estimate:.3e} exceeds {tolerance:.3e}")]
    StepSize { estimate: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
