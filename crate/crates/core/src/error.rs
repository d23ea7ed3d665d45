use thiserror::Error;

/// Every failure the solvers can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("singular matrix: no pivot in column {column}")]
    SingularMatrix { column: usize },

    #[error("solution failed the back-substitution check in row {row}")]
    VerificationFailed { row: usize },

    #[error("system is not square: {rows} equations, {cols} unknowns")]
    NotSquare { rows: usize, cols: usize },

    #[error("no value assigned to unknown d_{0}")]
    MissingAssignment(usize),

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("invalid step table: {0}")]
    InvalidTable(String),

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("negative discriminant at p = {0}")]
    NegativeDiscriminant(String),

    #[error("malformed decimal {input:?}: {reason}")]
    MalformedDecimal { input: String, reason: String },

    #[error("malformed rational {0:?}")]
    MalformedRational(String),
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, detail: impl Into<String>) -> Self {
        Error::OutOfRange { what, detail: detail.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
