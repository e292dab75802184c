use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown signal label `{0}`")]
    UnknownLabel(String),

    #[error("label sets overlap on `{0}`")]
    OverlappingSets(String),

    /// A covariance submatrix that must be positive definite is singular.
    #[error("degenerate covariance model: submatrix over {{{}}} is singular", labels.join(", "))]
    Degenerate { labels: Vec<String> },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("search space too large: about {estimate} candidate schemes ({reason})")]
    SearchSpace { estimate: u128, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
