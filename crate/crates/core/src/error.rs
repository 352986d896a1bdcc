use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("element `{element}` does not belong to group `{group}`")]
    ModelMismatch { element: String, group: String },
    #[error("ball enumeration exceeded the element budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(String),
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("feature factorization does not reproduce the Gram entry at ({row}, {col})")]
    FactorizationMismatch { row: usize, col: usize },
    #[error("sample points must be distinct; `{0}` repeats")]
    DuplicatePoint(String),
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.into(),
            reason: reason.into(),
        }
    }
}
