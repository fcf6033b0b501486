use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not in the span of Σ basis: {0}")]
    NotCentral(String),

    #[error("degenerate winding: {0}")]
    DegenerateWinding(String),

    #[error("internal parity error: {0}")]
    Parity(String),

    #[error("overlapping ranges: {0}")]
    OverlappingRanges(String),

    #[error("partition enumeration for n = {0} exceeds the limit of 12")]
    TooLarge(usize),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("q = {q} exceeds the exact-mode ceiling {ceiling}")]
    ExactBound { q: usize, ceiling: usize },

    #[error("negative multiplicity for {diagram}: inconsistent character oracle")]
    NegativeMultiplicity { diagram: String },

    #[error("invalid model parameter: {0}")]
    InvalidModel(String),

    #[error("formula mismatch: {0}")]
    FormulaMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("exact mode only: model `{0}` has no sampler")]
    ExactModeOnly(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
