use thiserror::Error;

/// Errors raised by the syntax, substitution calculus, certificate checker
/// and the normalizers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("context mismatch: {0}")]
    CtxtMismatch(String),

    #[error("de Bruijn index {depth} out of range for a context of length {len}")]
    IndexOutOfRange { depth: usize, len: usize },

    /// A derivation node whose rule side-condition does not hold.
    #[error("bad derivation node at {path}: {reason}")]
    BadNode { path: String, reason: String },

    /// A certificate produced by the glued engine failed to validate.
    /// This always indicates an engine bug.
    #[error("invalid certificate: {0}")]
    InvalidCert(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    /// The bounded conversion search could neither join nor separate the terms.
    #[error("conversion search exhausted its fuel")]
    FuelExhausted,

    #[error("malformed JSON at {path}: {reason}")]
    Json { path: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
