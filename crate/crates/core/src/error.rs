use thiserror::Error;

use crate::novikov::Exponent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("truncation orders differ ({0} vs {1})")]
    TruncationMismatch(Exponent, Exponent),
    #[error("λ-degree {degree} exceeds cap {cap}")]
    LambdaCap { degree: u32, cap: u32 },
    #[error("series has a nonzero constant term")]
    NonzeroConstant,
    #[error("map is not triangular: {0}")]
    NonTriangular(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("not a correspondence class: {0}")]
    NotCorrespondence(String),
    #[error("ambiguous lattice intersection (rank {0})")]
    Ambiguous(usize),
    #[error("empty moment slice")]
    EmptySlice,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("singular linear system: {0}")]
    Singular(String),
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
