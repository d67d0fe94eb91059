//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed layout header: {detail}")]
    MalformedHeader { line: usize, detail: String },
    #[error("line {line}: duplicate character '{ch}' in layout")]
    DuplicateCharacter { line: usize, ch: char },
    #[error("line {line}: duplicate key position (row {row}, col {col})")]
    DuplicatePosition { line: usize, row: usize, col: usize },
    #[error("unsupported language id '{0}'")]
    UnknownLanguage(String),
    #[error("layout has no keys")]
    EmptyLayout,
    #[error("line {line}: malformed row: {detail}")]
    MalformedRow { line: usize, detail: String },
    #[error("{path}: {source}")]
    LayoutFile {
        path: String,
        #[source]
        source: Box<Error>,
    },
    #[error("no layouts found in {0}")]
    NoLayouts(String),
    #[error("missing layouts for: {0}")]
    MissingLanguages(String),
    #[error("no eligible words")]
    NoEligibleWords,
    #[error("position weights need length >= 2, got {0}")]
    WordTooShort(usize),
    #[error("cannot halve a zero weight at index {0}")]
    HalveZeroWeight(usize),
    #[error("typo rate must be in [0, 1], got {0}")]
    RateOutOfRange(f64),
    #[error("max retries must be >= 1")]
    ZeroRetries,
    #[error("validation needs at least {min} samples, got {got}")]
    TooFewSamples { min: u64, got: u64 },
    #[error("line {line}: field '{field}' absent")]
    MissingField { line: usize, field: String },
    #[error("line {line}: field '{field}' is not a string")]
    NonStringField { line: usize, field: String },
    #[error("line {line}: invalid record: {detail}")]
    BadRecord { line: usize, detail: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
