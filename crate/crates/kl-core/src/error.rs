use thiserror::Error;

/// Errors produced by the group engine and the decision procedures.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("generator index {index} out of range for rank n={n}")]
    InvalidGenerator { index: usize, n: usize },

    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("invalid window {window:?}: {reason}")]
    InvalidWindow { window: Vec<i64>, reason: String },

    #[error("argument error: {0}")]
    Argument(String),

    #[error("{what} exceeds the configured cap of {cap} (needed {needed})")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        needed: usize,
    },

    #[error("internal invariant breach: {0}")]
    Internal(String),

    /// The mu decision procedure hit a state its branch analysis does not
    /// cover; the caller must fall back to the polynomial engine. Every
    /// occurrence is a counterexample candidate and should be reported.
    #[error("decision procedure requires fallback: {0}")]
    FallbackRequired(String),
}

pub type Result<T> = std::result::Result<T, Error>;
