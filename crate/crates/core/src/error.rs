use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("graph is not regular: vertex {u} has degree {deg_u}, vertex {v} has degree {deg_v}")]
    NotRegular {
        u: usize,
        deg_u: usize,
        v: usize,
        deg_v: usize,
    },

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("{}line {line}: {msg}", path.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        msg: String,
    },

    #[error("k = {k} is outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("enumeration of {count} subsets exceeds the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u64 },

    #[error("formula not applicable: {0}")]
    NotApplicable(String),

    #[error("field: {0}")]
    Field(String),

    #[error("insufficient coordinates: have {have}, need {need}")]
    InsufficientCoordinates { have: usize, need: usize },

    #[error("coordinates are inconsistent with any codeword (corruption?)")]
    InconsistentCoordinates,

    #[error("node {node} is irreparable: symbol {symbol} has no surviving replica")]
    Irreparable { node: usize, symbol: usize },

    #[error("integrity: {0}")]
    Integrity(String),

    #[error("definition violated: {0}")]
    Definition(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::Params(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: None,
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn with_path(self, p: &std::path::Path) -> Self {
        match self {
            Error::Parse { line, msg, .. } => Error::Parse {
                path: Some(p.to_path_buf()),
                line,
                msg,
            },
            other => other,
        }
    }
}
