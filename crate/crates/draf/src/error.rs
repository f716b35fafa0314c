//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed input {path}: {message}")]
    Parse { path: PathBuf, message: String },

    /// Feature cells must parse as finite reals; `row` is the 1-based data
    /// row and `col` the 1-based column of the offending cell.
    #[error("non-numeric feature cell at row {row}, column {col}: {cell:?}")]
    NonNumericCell {
        row: usize,
        col: usize,
        cell: String,
    },

    #[error("empty dataset: no data rows")]
    EmptyDataset,

    #[error("label column {name:?} not found in header")]
    MissingLabelColumn { name: String },

    #[error("dataset has no feature columns")]
    NoFeatureColumns,

    #[error("unknown variant {name:?} (valid: {valid})")]
    UnknownVariant { name: String, valid: String },

    #[error("label {name:?} does not appear in the model's label mapping")]
    UnknownLabel { name: String },

    #[error("feature count mismatch: model expects {expected}, data has {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cannot bootstrap an empty sample set")]
    EmptySampleSet,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("matrix dimensions do not agree: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),

    #[error("node has a single class; binary grouping needs at least two")]
    SingleClass,

    #[error("a hyperclass group is empty")]
    EmptyGroup,

    #[error("prediction vectors differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("kappa-error analysis needs at least two trees, got {got}")]
    TooFewTrees { got: usize },

    #[error("Friedman F statistic is degenerate: chi2_F equals N(K-1)")]
    DegenerateFriedman,

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
