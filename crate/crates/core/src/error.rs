use thiserror::Error;

/// Errors shared by every module of the workbench.
///
/// The split between `Parameter`, `Precondition` and `Capacity` mirrors the
/// exit codes of the command line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is malformed or out of the supported domain.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// A mathematical hypothesis of the requested operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The exhaustive computation would exceed the configured budget.
    #[error("capacity exceeded: {what} needs {needed}, budget is {budget}")]
    Capacity {
        what: String,
        needed: String,
        budget: String,
    },
    /// The poset lacks a join or meet for some pair.
    #[error("not a lattice: {0}")]
    NotALattice(String),
    /// No embedding in general position was found within the retry cap.
    #[error("general position failure: {0}")]
    GeneralPosition(String),
    /// Malformed input text or JSON.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn capacity(what: impl Into<String>, needed: impl ToString, budget: impl ToString) -> Self {
        Error::Capacity {
            what: what.into(),
            needed: needed.to_string(),
            budget: budget.to_string(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
