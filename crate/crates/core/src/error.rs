use thiserror::Error;

use crate::SignerId;

/// Operational failures: bad parameters, exhausted state, malformed input.
///
/// Cryptographic rejection is reported separately through [`VerifyError`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("duplicate signer id {0}")]
    DuplicateId(SignerId),
    #[error("unknown signer id {0}")]
    UnknownId(SignerId),
    #[error("epoch {epoch} outside [1, {max}]")]
    EpochOutOfRange { epoch: u64, max: u64 },
    #[error("signer exhausted: all {max} epochs used")]
    EpochExhausted { max: u64 },
    #[error("batch has {got} messages, expected {expected}")]
    BatchLength { expected: usize, got: usize },
    #[error("empty batch")]
    EmptyBatch,
    #[error("hybrid sub-signers out of lockstep (aggregate at {la}, post-quantum at {pq})")]
    EpochDesync { la: u64, pq: u64 },
    #[error("storage policy J1={j1} does not divide J={total}")]
    PolicyNotDivisor { j1: u64, total: u64 },
    #[error("decode error: {0}")]
    Decode(String),
}

impl Error {
    pub(crate) fn decode(msg: impl Into<String>) -> Self {
        Error::Decode(msg.into())
    }
}

/// Why a verifier refused a signature.
///
/// Structural mismatches (wrong signer, wrong epoch, wrong sizes) are kept
/// apart from a failed verification equation so callers can tell a
/// misrouted commitment from a forgery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("commitment and signature name different signers")]
    SignerMismatch,
    #[error("commitment epoch {commitment} does not match signature epoch {signature}")]
    EpochMismatch { commitment: u64, signature: u64 },
    #[error("epoch {0} outside the key lifetime")]
    EpochOutOfRange(u64),
    #[error("size mismatch: {0}")]
    Shape(&'static str),
    #[error("verification equation failed")]
    Invalid,
}

impl VerifyError {
    /// True for everything except a failed verification equation.
    pub fn is_structural(&self) -> bool {
        !matches!(self, VerifyError::Invalid)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
