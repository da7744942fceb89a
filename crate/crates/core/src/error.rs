use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("relation `{0}` is not a composable path")]
    NotComposable(String),
    #[error("relation `{0}` has length 1; use a quotient by arrows instead")]
    ShortRelation(String),
    #[error("presentation is not a string algebra: {0}")]
    NotStringAlgebra(String),
    #[error("invalid word at letter {position}: {reason}")]
    InvalidWord { position: usize, reason: String },
    #[error("word is anchored at `{found}`, expected `{expected}`")]
    AnchorMismatch { expected: String, found: String },
    #[error("words do not lie in a common chain")]
    ChainMismatch,
    #[error("invalid H-partition: {0}")]
    InvalidPartition(String),
    #[error("algebra is not domestic")]
    NonDomestic,
    #[error("band parameter must be nonzero")]
    ZeroParameter,
    #[error("invalid band: {0}")]
    InvalidBand(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("element is zero")]
    ZeroElement,
    #[error("modules are over different algebras")]
    AlgebraMismatch,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("two-sided word is periodic")]
    PeriodicWord,
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
