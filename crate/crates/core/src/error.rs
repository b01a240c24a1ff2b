use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An edge rewrite would produce an edge that is already present.
    #[error("multiple edge {0:?} would be created")]
    MultipleEdge(Vec<usize>),

    #[error("vertices {0} and {1} lie in a common edge")]
    SharedEdge(usize, usize),

    #[error("links of vertices {0} and {1} intersect")]
    SharedLink(usize, usize),

    #[error("pendant path structure error: {0}")]
    PendantPath(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("unknown ascent strategy `{0}`")]
    UnknownStrategy(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
