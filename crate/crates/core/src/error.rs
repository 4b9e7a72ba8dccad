use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The integrand produced a non-finite sample.
    #[error("non-finite integrand value {value} at {point:?}")]
    Evaluation { point: Vec<f64>, value: f64 },

    /// No admissible exponent exists below the pole of the tail integral.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A computation exceeded its desk-scale budget.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Two routes that must agree did not.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
