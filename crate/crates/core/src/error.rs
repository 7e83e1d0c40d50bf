use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The `(n, d, l, u)` instance violates `0 <= l < u <= d < n` or similar.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A user supplied channel table or experiment config is unusable.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// A threshold needed for decoding divides by a zero probability.
    #[error("degenerate instance: expected positive fraction for v = {v} is zero")]
    Degenerate { v: usize },

    #[error("enumeration budget exceeded: n = {n} > {limit}")]
    BudgetExceeded { n: usize, limit: usize },

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
