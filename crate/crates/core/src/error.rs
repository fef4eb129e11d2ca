use thiserror::Error;

/// Reason a pair (Λ, B̃) fails the compatibility test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncompatibleReason {
    OffDiagonal,
    FrozenBlockNonzero,
    NonpositiveD,
}

impl IncompatibleReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            IncompatibleReason::OffDiagonal => "off-diagonal",
            IncompatibleReason::FrozenBlockNonzero => "frozen-block-nonzero",
            IncompatibleReason::NonpositiveD => "nonpositive-d",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("skew-symmetric matrix has odd dimension {0}")]
    OddDimension(usize),
    #[error("modulus must be positive, got {0}")]
    InvalidModulus(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different cyclotomic contexts")]
    ContextMismatch,
    #[error("operands live in different twisted Laurent rings")]
    TwistMismatch,
    #[error("no exact quotient exists in the twisted Laurent ring")]
    NoExactQuotient,
    #[error("index {0} is not a mutable direction")]
    NotMutable(usize),
    #[error("invalid exchange data: {0}")]
    InvalidExchangeData(String),
    #[error("pair is not compatible ({}){}", reason.as_str(), hint.as_ref().map(|h| format!(": {h}")).unwrap_or_default())]
    NotCompatible {
        reason: IncompatibleReason,
        hint: Option<String>,
    },
    #[error("pair is not {ell}-compatible: {detail}")]
    NotEllCompatible { ell: u64, detail: String },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("lattice index {0} is not a perfect square")]
    NotPerfectSquare(String),
    #[error("exchange matrix is not acyclic")]
    NotAcyclic,
    #[error("presentation requires every index to be mutable")]
    HasFrozen,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("expected {expected} torus weights, got {got}")]
    WrongThetaCardinality { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::NotSkewSymmetric => "not-skew-symmetric",
            Error::OddDimension(_) => "odd-dimension",
            Error::InvalidModulus(_) => "invalid-modulus",
            Error::DivisionByZero => "division-by-zero",
            Error::ContextMismatch => "context-mismatch",
            Error::TwistMismatch => "twist-mismatch",
            Error::NoExactQuotient => "no-exact-quotient",
            Error::NotMutable(_) => "not-mutable",
            Error::InvalidExchangeData(_) => "invalid-exchange-data",
            Error::NotCompatible { .. } => "not-compatible",
            Error::NotEllCompatible { .. } => "not-ell-compatible",
            Error::HypothesisViolated(_) => "hypothesis-violated",
            Error::NotPerfectSquare(_) => "not-perfect-square",
            Error::NotAcyclic => "not-acyclic",
            Error::HasFrozen => "has-frozen",
            Error::VerificationFailed(_) => "verification-failed",
            Error::WrongThetaCardinality { .. } => "wrong-theta-cardinality",
            Error::Parse(_) => "parse-error",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
