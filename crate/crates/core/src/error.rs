use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    #[error("zero polynomial has no well-defined roots")]
    ZeroPolynomial,

    #[error("rank-one term {index} has a zero factor")]
    ZeroTerm { index: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("inconsistent system: {0}")]
    InconsistentSystem(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("normalization failed: {0}")]
    NormalizationFailure(String),

    #[error("no invertible element found in the slice span after {attempts} attempts")]
    NoInvertibleSpanElement { attempts: usize },

    #[error("retry budget of {budget} exhausted: {last}")]
    RetryBudgetExhausted { budget: usize, last: String },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::Singular => "singular-matrix",
            Error::RankDeficient(_) => "rank-deficient",
            Error::ZeroPolynomial => "zero-polynomial",
            Error::ZeroTerm { .. } => "zero-term",
            Error::InvalidInput(_) => "invalid-input",
            Error::Unsupported(_) => "unsupported",
            Error::HypothesisViolated(_) => "hypothesis-violated",
            Error::InconsistentSystem(_) => "inconsistent-system",
            Error::DegenerateInput(_) => "degenerate-input",
            Error::NormalizationFailure(_) => "normalization-failure",
            Error::NoInvertibleSpanElement { .. } => "no-invertible-span-element",
            Error::RetryBudgetExhausted { .. } => "retry-budget-exhausted",
            Error::VerificationFailed(_) => "verification-failed",
            Error::Parse(_) => "parse-error",
        }
    }
}
