use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),
    #[error("unknown root: {0}")]
    UnknownRoot(String),
    #[error("sequence is not a permutation of the reduced positive roots")]
    NotAPermutation,
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("root color mismatch: {0}")]
    ColorMismatch(String),
    #[error("singular weight {weight}: denominator factor {form} vanishes")]
    SingularWeight { weight: String, form: String },
    #[error("unknown basis symbol: {0}")]
    UnknownSymbol(String),
    #[error("elements use different normal orderings")]
    OrderingMismatch,
    #[error("elements use different truncation grades ({0} vs {1})")]
    TruncationMismatch(u32, u32),
    #[error("unsupported rank for quantum construction: {0}")]
    UnsupportedRank(String),
    #[error("spin {0} does not occur in the module")]
    SpinAbsent(String),
    #[error("({0}, {1}, {2}) violates the triangle inequality")]
    InvalidTriangle(String, String, String),
    #[error("uncancelled pole at q = 1: {0}")]
    SingularAtOne(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
