use thiserror::Error;

use crate::rational::Rational;

/// Errors raised by the symbolic engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Shapes that do not fit together: alphabet or truncation mismatch,
    /// missing substitution images, malformed partitions and so on.
    #[error("structural error: {0}")]
    Structural(String),

    /// A leading coefficient that must be nonzero vanished.
    #[error("degenerate: {message}")]
    Degenerate { message: String, mu: Vec<Rational> },

    /// A decode oracle whose answers are not those of any standard cycle.
    #[error("oracle is not standard: {0}")]
    NotStandard(String),

    /// Decode queries that an oracle table cannot answer.
    #[error("missing oracle queries: {}", .0.join(", "))]
    MissingQueries(Vec<String>),

    /// Something that the mathematics guarantees did not happen.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! structural {
    ($($arg:tt)*) => {
        $crate::error::Error::Structural(format!($($arg)*))
    };
}
pub(crate) use structural;
