use std::fmt;

/// Errors shared by parsing, validation, generation, and the solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input text could not be parsed; `line` is 1-based.
    Parse { line: usize, message: String },
    /// The existing elements do not span the instance (for graphs: the
    /// existing edges leave the vertex set in `components` pieces).
    InfeasibleInstance { components: usize },
    /// Weight magnitudes leave no head-room for exact 64-bit objective sums.
    OverflowRisk,
    /// An operation was called outside its stated contract.
    PreconditionViolated(&'static str),
    /// A structural guarantee failed mid-run; indicates a bug or an oracle
    /// that violates matroid axioms.
    InternalInvariantBroken(&'static str),
    /// Exhaustive verification was requested beyond the configured horizon cap.
    CapExceeded { horizon: usize, cap: usize },
    /// Generator or constructor parameters out of range.
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::InfeasibleInstance { components } => write!(
                f,
                "infeasible instance: existing elements span {components} components instead of 1"
            ),
            Error::OverflowRisk => write!(
                f,
                "overflow risk: weight magnitudes too large for exact 64-bit objective arithmetic"
            ),
            Error::PreconditionViolated(what) => write!(f, "precondition violated: {what}"),
            Error::InternalInvariantBroken(what) => write!(f, "internal invariant broken: {what}"),
            Error::CapExceeded { horizon, cap } => write!(
                f,
                "horizon {horizon} exceeds the exhaustive-check cap {cap}"
            ),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
