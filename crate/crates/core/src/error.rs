use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid bath or solver parameters.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Quadrature, root finding or fitting failed to converge.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The self-consistent renormalization has no unique solution, so the
    /// unitary-transformation treatment does not apply.
    #[error("method validity error: {0}")]
    MethodValidity(String),

    #[error("no root of the pole condition found in ({lo}, {hi})")]
    PoleNotFound { lo: f64, hi: f64 },

    /// Two independent evaluation routes disagreed beyond tolerance.
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
