use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("could not parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    /// Two computation routes disagree.
    #[error("validation failed for N={n}, ell={ell} ({methods}): {detail}")]
    Validation {
        n: usize,
        ell: usize,
        methods: &'static str,
        detail: String,
    },

    #[error("no convergence after {terms} terms: achieved error {achieved:e}, wanted {wanted:e}")]
    Convergence {
        terms: usize,
        achieved: f64,
        wanted: f64,
    },

    #[error("value out of floating-point range: {0}")]
    EvaluationRange(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// Usage-type errors (bad flags, violated preconditions) as opposed to
    /// failed checks.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parameter(_) | Error::Parse { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
