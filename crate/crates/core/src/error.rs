use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range at level {level} (expected 1..={max})")]
    IndexOutOfRange { level: u32, index: u64, max: u64 },

    #[error("gap width {delta} at level {level} is not strictly below 3^-(level+1)")]
    InadmissibleDelta { level: u32, delta: Rational },

    #[error("sequence defines levels 0..={available}, level {required} was requested")]
    SequenceTooShort { required: u32, available: u32 },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("covering budget of {limit} squares exceeded after {partial} squares")]
    Budget { limit: usize, partial: usize },

    #[error("comparison `{link}` still unresolved at {bits} bits")]
    Inconclusive { link: String, bits: u32 },

    #[error("render depth {depth} exceeds cap {cap}")]
    DepthCap { depth: u32, cap: u32 },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("re-verification at {requested} bits requested but certificate was built at {stored} bits")]
    PrecisionMismatch { requested: u32, stored: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
