//! Error type shared across the crate.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("corpus root not found: {0}")]
    MissingRoot(PathBuf),

    #[error("class directory `{0}` contains no documents")]
    EmptyClass(String),

    #[error("{path}:{line}: malformed record, expected `sentence<TAB>label`")]
    MalformedRecord { path: PathBuf, line: usize },

    #[error("invalid UTF-8 in {0}")]
    InvalidUtf8(PathBuf),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("training split is empty")]
    EmptyTraining,

    #[error("vocabulary does not match corpus: {0}")]
    VocabularyMismatch(String),

    #[error("class `{0}` has no training documents")]
    ClassWithoutTraining(String),

    #[error("training requires at least two classes, found {0}")]
    SingleClass(usize),

    #[error("non-finite feature value at row {row}, column {column}")]
    NonFiniteFeature { row: usize, column: usize },

    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("row/label count mismatch: {rows} rows vs {labels} labels")]
    LabelMismatch { rows: usize, labels: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("{path}:{line}: {detail}")]
    FormatParse {
        path: PathBuf,
        line: usize,
        detail: String,
    },

    #[error("unsupported model format `{found}`, expected `{expected}`")]
    FormatVersion { found: String, expected: String },

    #[error("model file {path}: {detail}")]
    ModelParse { path: PathBuf, detail: String },

    #[error("download failed: {0}")]
    Fetch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
