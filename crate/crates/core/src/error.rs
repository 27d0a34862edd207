use thiserror::Error;

use crate::tree::Path;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid label `{label}`: {message}")]
    Label { label: String, message: String },

    #[error("invalid path {path:?}: {message}")]
    InvalidPath { path: Path, message: String },

    #[error("node at {path:?} is not a coordination candidate")]
    NotCandidate { path: Path },

    #[error("instance at {path:?} was rejected and cannot be transformed")]
    RejectedInstance { path: Path },

    #[error("cannot flatten clause at {path:?}: {message}")]
    Flatten { path: Path, message: String },

    #[error("empty cluster signature")]
    EmptySignature,

    #[error("unlabelable clusters: no NP, PP, ADJP or SBAR among {categories:?}")]
    Unlabelable { categories: Vec<String> },

    #[error("malformed ACC structure at {path:?}: {message}")]
    MalformedAcc { path: Path, message: String },

    #[error("gold annotation error at line {line}: {message}")]
    Gold { line: usize, message: String },

    #[error("token mismatch in sentence {sentence}: {message}")]
    TokenMismatch { sentence: usize, message: String },

    #[error("{0}")]
    Evaluation(String),

    #[error("grammar error: {0}")]
    Grammar(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}
