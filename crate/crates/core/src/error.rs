use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is outside the supported range {range}")]
    Range {
        what: &'static str,
        value: i64,
        range: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finding for degree {n} did not converge from initial guess {guess:e}")]
    Convergence { n: usize, guess: f64 },

    /// The operator under test does not satisfy the exactness hypothesis the
    /// requested inequality or bound depends on. Distinct from an inequality
    /// that was checked and found false.
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("evaluation failed at {location}: {source}")]
    Evaluation {
        location: String,
        #[source]
        source: EvalError,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
