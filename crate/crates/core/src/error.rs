use thiserror::Error;

/// Errors raised by the automaton laboratory.
///
/// `Invariant` marks a numerical identity that failed mid-computation (a
/// clamp outside tolerance, a monotonicity or bound violation). Everything
/// else is a rejected input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mass must lie in [0, 1], got {0}")]
    MassOutOfRange(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} is undefined at k = {k}, m = {m}")]
    Singular { what: &'static str, k: f64, m: f64 },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("numerical invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of numerical identities, as opposed to bad inputs.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
