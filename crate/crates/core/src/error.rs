use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An index (node, edge or scenario) lies outside the instance.
    #[error("structural error: {0}")]
    Structural(String),

    /// Structurally valid input that breaks a semantic rule.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid chromosome length {0}")]
    InvalidLength(usize),

    #[error("infeasible instance: terminal {from} cannot reach terminal {to}")]
    Infeasible { from: NodeLabel, to: NodeLabel },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("instance too large for exhaustive search: {what} = {found} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        found: usize,
        limit: usize,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("scenario probabilities sum to {sum}, expected 1 within {tolerance}")]
    ProbabilitySum { sum: f64, tolerance: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Node id printed 1-based in error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeLabel(pub usize);

impl std::fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}
