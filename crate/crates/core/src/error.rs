use thiserror::Error;

use crate::query::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("encoding length {length} is shorter than the canonical length {canonical}")]
    EncodingTooShort { length: usize, canonical: usize },

    #[error("track arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("unknown track `{0}`")]
    UnknownTrack(String),

    #[error("duplicate track `{0}`")]
    DuplicateTrack(String),

    #[error("determinization exceeded the cap of {cap} subset states")]
    StateCapExceeded { cap: usize },

    #[error("window target set {0:?} must be a nonempty subset of 1..=7")]
    InvalidWindow(Vec<u8>),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("unknown predicate `${0}`")]
    UnknownPredicate(String),

    #[error("predicate `${name}` expects {expected} arguments, got {got}")]
    PredicateArity {
        name: String,
        expected: usize,
        got: usize,
    },

    #[error("formula has no free variables")]
    NoFreeVariables,

    #[error("relation is not of the required shape: {0}")]
    BadRelation(String),

    #[error("singular matrix")]
    Singular,

    #[error("matrix dimensions do not agree: {0}")]
    Dimension(String),

    #[error("division by the zero polynomial")]
    ZeroPolynomial,

    #[error("malformed {format} file at line {line}: {msg}")]
    Format {
        format: &'static str,
        line: usize,
        msg: String,
    },
}
