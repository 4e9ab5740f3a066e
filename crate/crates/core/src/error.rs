use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("file is empty")]
    EmptyFile,
    #[error("column `{0}` not found")]
    MissingColumn(String),
    #[error("label column must hold exactly two distinct values, found {found}: {values:?}")]
    LabelCardinality { found: usize, values: Vec<String> },
    #[error("positive label `{0}` does not occur in the label column")]
    UnknownPositiveLabel(String),
    #[error("row {row}, column `{column}`: `{value}` is not a number")]
    NotNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}: missing value in column `{column}`")]
    MissingValue { row: usize, column: String },
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("dataset has a single class; both labels are required")]
    SingleClass,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("non-finite training loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("fold {fold} failed: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("unsupported model schema version {0}")]
    SchemaVersion(u32),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
