use thiserror::Error;

/// Errors raised by constructions and audits.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point sets differ: {0}")]
    DomainMismatch(String),

    #[error("closure exceeded the carrier cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("element {0} is not in the carrier")]
    NotInCarrier(String),

    #[error("map is not well defined: {0}")]
    NotWellDefined(String),

    #[error("embedding failure: {0}")]
    EmbeddingFailure(String),

    #[error("tower level {requested} exceeds the built maximum {max}")]
    LevelOverflow { requested: usize, max: usize },

    #[error("scalar {alpha} is not supported by scalar denominator {den}")]
    ScalarUnsupported { alpha: String, den: u64 },

    #[error("group map does not preserve the strong unit: {0}")]
    NotUnitPreserving(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("signature violation: {0}")]
    SignatureViolation(String),

    #[error("grid of {points} points exceeds the bound {bound}")]
    GridTooLarge { points: usize, bound: usize },

    #[error("schema error at {pointer}: {msg}")]
    Schema { pointer: String, msg: String },

    #[error("rational arithmetic overflow")]
    Overflow,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
