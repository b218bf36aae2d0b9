use thiserror::Error;

use crate::threepass::{Phase, Role};

/// Errors from the alphabet, text, key and cipher layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CipherError {
    #[error("invalid character {0:?}: only the letters A-Z are allowed here")]
    InvalidCharacter(char),
    #[error("letter index {0} is outside 0..26")]
    IndexOutOfRange(u32),
    #[error("key is empty")]
    EmptyKey,
    #[error("key stream has {actual} letters but the text has {expected}")]
    KeyLengthMismatch { expected: usize, actual: usize },
}

/// Errors raised by a three-pass session.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("protocol violation: {operation} is not allowed for {role:?} in phase {phase:?}")]
    ProtocolViolation {
        operation: &'static str,
        role: Role,
        phase: Phase,
    },
    #[error("policy mismatch: recovered text differs from the original")]
    PolicyMismatch,
    #[error(transparent)]
    Cipher(#[from] CipherError),
}

/// Errors from statistical analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("frequency table line {line}: {reason}")]
    FrequencyTable { line: usize, reason: String },
}
