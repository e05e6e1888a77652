use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is not valid UTF-8 (first bad byte at offset {0})")]
    Encoding(usize),

    #[error("invalid lexicon: {0}")]
    Lexicon(String),

    #[error("invalid stop list: {0}")]
    StopList(String),

    #[error("ontology parse error: {0}")]
    OntologyParse(String),

    #[error("relation {predicate} references unknown entity `{id}`")]
    DanglingEndpoint { id: String, predicate: String },

    #[error("is_a cycle through entity `{0}`")]
    IsACycle(String),

    #[error("entity `{id}` has multiple is_a parents: {parents:?}")]
    MultipleParents { id: String, parents: Vec<String> },

    #[error("invalid ontology: {0}")]
    InvalidOntology(String),

    #[error("unknown entity `{0}`")]
    UnknownEntity(String),

    #[error("document title must not be empty")]
    EmptyTitle,

    #[error("no <title> or <h1> element found in page")]
    NoTitle,

    #[error("no body text extracted from page")]
    EmptyBody,

    #[error("invalid document: {0}")]
    InvalidDocument(String),

    #[error("unsupported index format version `{found}` (supported: {supported})")]
    Version { found: String, supported: String },

    #[error("checksum mismatch for {0}")]
    Checksum(String),

    #[error("truncated index file {0}")]
    Truncated(String),

    #[error("corrupt index: {0}")]
    CorruptIndex(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("query is empty after stop-word removal")]
    EmptyQuery,

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("unknown ranking mode `{0}` (expected weighted or normal)")]
    UnknownMode(String),

    #[error("ground truth parse error at line {line}: {detail}")]
    TruthParse { line: usize, detail: String },

    #[error("unknown document `{0}`")]
    UnknownDocument(String),

    #[error("duplicate document `{doc_id}` in ranking list for query `{query}`")]
    DuplicateRanking { query: String, doc_id: String },

    #[error("invalid feedback: {0}")]
    InvalidFeedback(String),

    #[error("fetching {url} failed: {detail}")]
    Fetch {
        url: String,
        /// Upstream HTTP status, when the server answered.
        status: Option<u16>,
        detail: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
