use std::io;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("node index {0} is out of range")]
    InvalidNode(usize),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    /// A sampler (or sampling primitive) has nothing with positive weight to draw from.
    #[error("no eligible structure: {0}")]
    NoEligibleStructure(String),

    /// The requested method cannot run on this graph because its root weight is zero.
    #[error("method {method} is inapplicable: {reason}")]
    Inapplicable { method: &'static str, reason: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("projected {projected} connected induced subgraphs exceeds the cap of {cap}")]
    ScaleCap { projected: u128, cap: u128 },

    #[error("decision tape exhausted for trial {trial} at choice {choice}")]
    TapeExhausted { trial: u64, choice: String },

    #[error("decision tape mismatch for trial {trial}: expected {expected}, found {found}")]
    TapeMismatch { trial: u64, expected: String, found: String },

    #[error("pilot produced no hits for motif {0}; increase pilot budget")]
    NoPilotHits(usize),

    #[error("cache: {0}")]
    Cache(String),

    /// Internal signal used by exhaustive outcome enumeration to abandon a rejected branch.
    #[error("sampling branch rejected")]
    Rejected,

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
