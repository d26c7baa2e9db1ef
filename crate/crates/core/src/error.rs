use thiserror::Error;

/// Errors raised by the workbench.
///
/// Each variant maps onto one CLI exit code (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The exact engine would exceed its size budget; use float mode.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// One-sided limits do not exist for this function.
    #[error("not regulated: {0}")]
    NotRegulated(String),
    /// A constructor received arguments violating the type invariants.
    #[error("construction error: {0}")]
    Construction(String),
    /// The operation needs exactly known variation (rational turning points).
    #[error("needs breakpoints: {0}")]
    NeedsBreakpoints(String),
    /// A trajectory or selection did not stabilize; carries best-effort data.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    /// An internally certified bound was violated.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// The operation is not defined for this gallery variant.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Process exit code used by the CLI for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity(_) => 4,
            Error::Inconclusive(_) => 3,
            _ => 1,
        }
    }

    /// The message without the kind prefix.
    pub fn message(&self) -> &str {
        match self {
            Error::Domain(m)
            | Error::Capacity(m)
            | Error::NotRegulated(m)
            | Error::Construction(m)
            | Error::NeedsBreakpoints(m)
            | Error::Inconclusive(m)
            | Error::Consistency(m)
            | Error::Parse(m)
            | Error::Unsupported(m) => m,
        }
    }

    /// Short machine-readable kind tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Capacity(_) => "capacity",
            Error::NotRegulated(_) => "not-regulated",
            Error::Construction(_) => "construction",
            Error::NeedsBreakpoints(_) => "needs-breakpoints",
            Error::Inconclusive(_) => "inconclusive",
            Error::Consistency(_) => "consistency",
            Error::Parse(_) => "parse",
            Error::Unsupported(_) => "unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
