//! Lightweight signatures for constrained signers, backed by a commitment oracle.
//!
//! Three schemes share one deployment model: a signer that only hashes (and,
//! for the aggregate scheme, does a few modular multiplications), a verifier,
//! and a commitment oracle that holds master secrets and hands out the
//! per-epoch public commitments the signer never has to transmit.
//!
//! * [`pq`]: forward-secure hash-based one-time signatures over a hash-chain
//!   key schedule.
//! * [`la`]: single-signer aggregate signatures over a prime-order group.
//! * [`hy`]: the two nested; the aggregate signature and the batch digest are
//!   signed again by the hash-based layer.
//! * [`cco`]: the commitment oracle as an in-process store and a TCP service.

pub mod cco;
pub(crate) mod codec;
pub mod container;
pub mod error;
pub mod group;
pub mod hash;
pub mod hy;
pub mod id;
pub mod la;
pub mod pq;
pub mod secret;

pub use error::{Error, Result, VerifyError};
pub use group::{Group, GroupElement, GroupParams, Scalar};
pub use hash::{Digest, Domain, HashCounters};
pub use id::SignerId;
pub use secret::{MasterKey, SeedKey};

/// Scheme tags shared by key files and wire messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Scheme {
    Pq = 0x01,
    La = 0x02,
    Hy = 0x03,
}

impl Scheme {
    pub fn from_tag(tag: u8) -> Option<Scheme> {
        match tag {
            0x01 => Some(Scheme::Pq),
            0x02 => Some(Scheme::La),
            0x03 => Some(Scheme::Hy),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Pq => "pq",
            Scheme::La => "la",
            Scheme::Hy => "hy",
        }
    }
}
