use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),

    #[error("genus {0} out of range: {1}")]
    GenusOutOfRange(usize, &'static str),

    #[error("unknown curve name `{0}`")]
    UnknownCurve(String),

    #[error("index out of range for genus {genus}: {symbol}")]
    IndexOutOfRange { symbol: String, genus: usize },

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("class is not primitive: {0}")]
    NotPrimitive(String),

    #[error("class is zero")]
    ZeroClass,

    #[error("matrix is not symplectic")]
    NotSymplectic,

    #[error("form value q(z) = 0, class not in the transvection domain: {0}")]
    NotInLambda(String),

    #[error("enumeration cap exceeded: genus {0} > cap {1}")]
    CapExceeded(usize, usize),

    #[error("closure cap exceeded after {0} elements")]
    ClosureCapExceeded(usize),

    #[error("divisibility failure: {0} - {1} is not a multiple of 8 (surface not characteristic)")]
    NotCharacteristic(i64, i64),

    #[error("tack sequence invalid: {0}")]
    BadTackSequence(String),

    #[error("unlicensed move: {0}")]
    UnlicensedMove(String),

    #[error("move precondition failed: {0}")]
    MovePrecondition(String),

    #[error("factorization failed for {tacks}: {message}")]
    Factorization { tacks: String, message: String },
}
