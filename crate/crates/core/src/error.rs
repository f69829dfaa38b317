use thiserror::Error;

/// Errors raised by the algebra, field and quadrature layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Grades of the operands are incompatible with the operation.
    #[error("degree error: {0}")]
    Degree(String),

    /// A sampled value or step was not finite, or a step size was not positive.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Configuration parameters violate their invariants.
    #[error("config error: {0}")]
    Config(String),

    /// A quadrature grid does not cover the support of its integrand.
    #[error("coverage error: {0}")]
    Coverage(String),

    /// An internal consistency check failed. Indicates a bug, not bad input.
    #[error("internal invariant failure: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
