//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("element {0} is a member of the tested set")]
    ElementInSet(usize),

    #[error("round cap of {cap} exceeded (sample-size parameter too small or universe inconsistent)")]
    RoundCapExceeded { cap: u64 },

    #[error("computation cap exceeded after {pairs} S-pairs")]
    ComputationCap { pairs: u64 },

    #[error("escalation budget exhausted after {escalations} escalations: {reason}")]
    EscalationExhausted { escalations: u32, reason: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
