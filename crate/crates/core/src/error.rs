use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("multiplier compatibility violated at {witness}")]
    CompatibilityViolation { witness: String },

    #[error("algebra `{0}` has no star structure")]
    NoStar(String),

    #[error("morphism is not non-degenerate: {0}")]
    NotNondegenerate(String),

    #[error("multiplier Hopf algebra `{0}` is not regular")]
    NotRegular(String),

    #[error("map `{0}` is not invertible")]
    NotInvertible(String),

    #[error("inconsistent counit: {0}")]
    InconsistentCounit(String),

    #[error("inconsistent antipode: {0}")]
    InconsistentAntipode(String),

    #[error("insufficient cover: {0}")]
    InsufficientCover(String),

    #[error("pairing has not been verified as a pairing: {0}")]
    NotPairingVerified(String),

    #[error("verification failed: {check}: {witness}")]
    VerificationFailed { check: String, witness: String },

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("antipode is not invertible: {0}")]
    AntipodeNotInvertible(String),

    #[error("value not available: {0}")]
    Unavailable(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn failed(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::VerificationFailed {
            check: check.into(),
            witness: witness.into(),
        }
    }
}
