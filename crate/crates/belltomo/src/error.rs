use thiserror::Error;

/// Errors produced by the belltomo library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a precondition (wrong length, value out of range, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A size parameter exceeds the supported enumeration range.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An internally verified identity failed. This signals a bug (for
    /// example a wrong digit-mapping convention), never bad user input.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    /// A numerical routine could not reach the requested accuracy.
    /// Carries the accuracy actually achieved.
    #[error("accuracy target not met: {context} (achieved {achieved:e})")]
    Accuracy { context: String, achieved: f64 },

    /// A search finished without a single successful evaluation.
    #[error("search failed: {0}")]
    Search(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
