use thiserror::Error;

/// Errors produced by the juggling library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is out of range ({allowed})")]
    Range {
        what: &'static str,
        value: usize,
        allowed: String,
    },

    #[error("illegal throw of height {height} from state {state}: {reason}")]
    IllegalThrow {
        state: String,
        height: usize,
        reason: &'static str,
    },

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("state {0} is not a vertex of this graph or chain")]
    UnknownState(String),

    #[error("chain is {0}; stationary distribution is not unique or the limit does not exist")]
    Structure(&'static str),

    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    Convergence {
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    #[error("length mismatch: {left} vs {right}")]
    Shape { left: usize, right: usize },

    #[error("invalid set partition: {0}")]
    InvalidPartition(String),

    #[error("invalid TL-state {state}: {reason}")]
    InvalidTlState { state: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn range(what: &'static str, value: usize, allowed: impl Into<String>) -> Error {
    Error::Range {
        what,
        value,
        allowed: allowed.into(),
    }
}
