//! Corpus ingestion, permutation files, manifests and materialization.

mod corpus;
mod manifest;
mod permutation;
mod scaling_files;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use corpus::{file_digest, load_scored_jsonl, CorpusHandle, RecordSpan};
pub use manifest::{manifest_path_for, materialize, Manifest, MANIFEST_VERSION};
pub use permutation::{
    decode_permutation, encode_permutation, export_permutation, import_permutation, PermFormat,
    PERM_MAGIC,
};
pub use scaling_files::{
    read_constants_json, read_observations_csv, write_observations_csv, ConstantsDocument,
};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("EmptyCorpus: {} holds no records", .0.display())]
    EmptyCorpus(PathBuf),
    #[error("ParseError: line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("InvalidScore: line {line}: field {field:?} is missing, non-numeric or non-finite")]
    InvalidScore { line: usize, field: String },
    #[error("DuplicateId: id {id:?} repeats on line {line}")]
    DuplicateId { id: String, line: usize },
    #[error("FormatError: {0}")]
    Format(String),
    #[error("ValidationError: {0}")]
    Validation(#[from] crate::ordering::PlanViolation),
    #[error("StaleIndex: {} changed since it was indexed (expected sha256 {expected}, found {found})", .path.display())]
    StaleIndex {
        path: PathBuf,
        expected: String,
        found: String,
    },
    #[error("DimensionError: {0}")]
    Dimension(String),
}

impl DatasetError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        DatasetError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, DatasetError>;
