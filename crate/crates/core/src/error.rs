use thiserror::Error;

/// Errors raised by the numerical kernels and the identity catalog.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order must be finite, got {0}")]
    NonFiniteOrder(f64),

    #[error("gamma has a pole at {0}")]
    Pole(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("jet mismatch: {0}")]
    JetMismatch(String),

    #[error("jet division by a series with zero constant term")]
    JetDivisionByZero,

    #[error("jet power needs a positive constant term, got {0}")]
    JetNonPositiveBase(f64),

    #[error("requested derivative {requested} exceeds jet truncation order {order}")]
    JetOrderExceeded { requested: usize, order: usize },

    #[error("invalid endpoint profile ({left}, {right}): exponents must exceed -1")]
    InvalidProfile { left: f64, right: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e})")]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },

    #[error("series did not converge after {terms} terms")]
    SeriesNotConverged { terms: usize },

    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
