use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} is not valid UTF-8")]
    InvalidUtf8 { path: PathBuf },
    #[error("test set is empty: {path}")]
    EmptyTestSet { path: PathBuf },
    #[error("line-count mismatch: references have {refs} lines, sources have {srcs}")]
    SourceReferenceMismatch { refs: usize, srcs: usize },
    #[error("system `{system}` has {actual} lines, expected {expected}")]
    SystemLineCount {
        system: String,
        expected: usize,
        actual: usize,
    },
    #[error("duplicate system name `{0}`")]
    DuplicateSystem(String),
    #[error("no system outputs found")]
    NoSystems,
    #[error("invalid system name derived from {0}")]
    InvalidSystemName(PathBuf),
    #[error("parse error at row {row}, column {col}: {message}")]
    Parse { row: usize, col: usize, message: String },
    #[error("malformed file: {0}")]
    Format(String),
    #[error("non-finite value for `{0}`")]
    NonFinite(String),
    #[error("segment id {id} out of range for a parent of size {parent_size}")]
    IdOutOfRange { id: usize, parent_size: usize },
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("score matrix has {actual} rows, test set has {expected} segments")]
    RowCountMismatch { expected: usize, actual: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {required} systems, got {actual}")]
    InsufficientSystems { required: usize, actual: usize },
    #[error("filtering percentage {0} outside [0, 100)")]
    InvalidLambda(f64),
    #[error("no instances survive filtering {lambda}% of {n}")]
    EmptyResult { lambda: f64, n: usize },
    #[error("correlation is undefined: {0}")]
    UndefinedCorrelation(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("empty group: {0}")]
    EmptyGroup(&'static str),
    #[error("system `{0}` has no human rating")]
    MissingHumanScore(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
