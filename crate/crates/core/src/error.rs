use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's domain.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Parameters excluded by one of the code constructions.
    #[error("excluded parameters: {0}")]
    Excluded(String),

    /// The requested computation exceeds the default desk-scale budget.
    #[error("refused without --long: {what} (estimated {estimate})")]
    ScaleGuard { what: String, estimate: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
