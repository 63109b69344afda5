use thiserror::Error;

/// Errors raised by the p-adic machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("mismatched contexts or parameters: {0}")]
    Mismatch(String),
    #[error("expected a p-adic unit: {0}")]
    NotUnit(String),
    #[error("division by an element that is zero at its precision")]
    DivisionByZero,
    #[error("element is not integral: {0}")]
    NonIntegral(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("matrix is not in the required monoid: {0}")]
    NotInMonoid(String),
    #[error("period point outside the required neighbourhood: {0}")]
    OutsideNeighbourhood(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("precision exhausted in {op}: {detail}")]
    PrecisionExhausted { op: &'static str, detail: String },
    #[error("coefficient {index} has unknown valuation at the working precision")]
    UnknownValuation { index: usize },
    #[error("slope {h} is not adapted to the Newton polygon")]
    NotAdapted { h: String },
    #[error("invalid complex template: {0}")]
    Template(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn exhausted(op: &'static str, detail: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
