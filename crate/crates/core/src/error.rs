use thiserror::Error;

use crate::report::Report;

/// Errors raised while building or combining finite setoid structures.
///
/// Law failures discovered by a checker are returned as a [`Report`], not as
/// an error. The exceptions are constructors whose precondition is itself a
/// law (a strictly closed equivalence, a compatible cocone); those surface
/// the offending report through [`Error::Law`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("missing transport for related pair {from} -> {to}")]
    MissingTransport { from: String, to: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("extensionality fails for {0}")]
    Extensionality(String),

    #[error("incompatible cocone: {0}")]
    Compatibility(String),

    #[error("invalid arrow: {0}")]
    InvalidArrow(String),

    #[error("law violated: {}", .0.summary())]
    Law(Report),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Whether the error reports a failed law (as opposed to bad input).
    pub fn is_law_failure(&self) -> bool {
        matches!(
            self,
            Error::Law(_) | Error::Extensionality(_) | Error::Compatibility(_) | Error::InvalidArrow(_)
        )
    }
}
