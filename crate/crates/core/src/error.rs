use thiserror::Error;

/// Errors raised by the library. Each variant carries enough context to reproduce the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid prime {0}: an odd prime is required")]
    BadPrime(u64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unrealizable invariants: {0}")]
    Unrealizable(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("lattice escapes window: {0}; enlarge (a, b)")]
    WindowOverflow(String),
    #[error("not a minimal double coset representative")]
    NotMinimal,
    #[error("request exceeds desk envelope: {0} (use --force)")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
