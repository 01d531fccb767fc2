use thiserror::Error;

/// Errors shared across the toolkit.
///
/// `Parameter` covers contract violations visible at the call boundary
/// (bad sizes, out-of-range arguments). `FailedVerification` is reserved
/// for inputs that parse fine but fail a mathematical check that an
/// operation requires. `BudgetExceeded` is the loud-failure path of the
/// exact searches: it carries the best bounds proven before the cutoff
/// instead of silently degrading to a heuristic.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("parse error (line {line}): {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("graph mismatch: {0}")]
    GraphMismatch(String),

    #[error("biclique {index} is invalid: {u} and {v} are not adjacent in the target graph")]
    InvalidBiclique { index: usize, u: String, v: String },

    #[error("input failed verification: {0}")]
    FailedVerification(String),

    #[error("search budget exceeded: {context}")]
    BudgetExceeded {
        context: String,
        /// Lower bound proven before the search was cut off, if any.
        best_lower: Option<u64>,
        /// Best feasible solution size found before the cutoff, if any.
        best_upper: Option<u64>,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn budget(context: impl Into<String>) -> Self {
        Error::BudgetExceeded {
            context: context.into(),
            best_lower: None,
            best_upper: None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
