use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error("unknown role {0:?}")]
    UnknownRole(String),
    #[error("case {0:?} has an empty document")]
    EmptyDocument(String),
    #[error("case {id:?}: field `{field}` is empty")]
    EmptyField { id: String, field: &'static str },
    #[error("invalid sentence: {0}")]
    InvalidSentence(String),
    #[error("sentence text contains reserved marker {marker:?}")]
    MarkerCollision { marker: &'static str },
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("bad split ratios: {0}")]
    BadRatios(String),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("word limit must be at least 1, got {0}")]
    BadLimit(usize),
    #[error("n-gram order must be at least 1, got {0}")]
    BadN(usize),
    #[error("no (reference, hypothesis) pairs to score")]
    EmptyPairList,
    #[error("case {0:?} is not in the corpus")]
    UnknownId(String),
    #[error("corpus failed validation ({0} problem(s)); run `validate` for details")]
    InvalidCorpus(usize),
    #[error("no hypothesis for case {0:?}")]
    MissingHypothesis(String),
    #[error("no role predictions for case {0:?}")]
    MissingPredictions(String),
    #[error("length mismatch for {context}: expected {expected}, got {actual}")]
    LengthMismatch {
        context: String,
        expected: usize,
        actual: usize,
    },
    #[error("classification input is empty")]
    EmptyInput,
    #[error("class weights need at least one argumentative sentence")]
    NoArgumentative,
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// I/O failures map to exit status 2 in the CLI, everything else to 1.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
