use std::fmt;

use rand::{CryptoRng, RngCore};
use zeroize::{Zeroize, ZeroizeOnDrop};

use crate::hash::{Digest, DIGEST_LEN};

/// 256-bit master secret held only by the commitment oracle.
///
/// Cleared on drop. Clearing is best effort: the bytes may have been copied
/// by the allocator or the caller before that point.
#[derive(Clone, PartialEq, Eq, Zeroize, ZeroizeOnDrop)]
pub struct MasterKey([u8; DIGEST_LEN]);

impl MasterKey {
    pub fn generate<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        let mut k = [0u8; DIGEST_LEN];
        rng.fill_bytes(&mut k);
        MasterKey(k)
    }

    pub fn from_bytes(bytes: [u8; DIGEST_LEN]) -> Self {
        MasterKey(bytes)
    }

    pub fn expose(&self) -> &[u8; DIGEST_LEN] {
        &self.0
    }
}

impl fmt::Debug for MasterKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MasterKey(..)")
    }
}

/// Evolving per-epoch chain key of a forward-secure signer.
#[derive(Clone, PartialEq, Eq, Zeroize, ZeroizeOnDrop)]
pub struct SeedKey([u8; DIGEST_LEN]);

impl SeedKey {
    pub fn from_digest(d: Digest) -> Self {
        SeedKey(d.0)
    }

    pub fn expose(&self) -> &[u8; DIGEST_LEN] {
        &self.0
    }

    pub fn to_digest(&self) -> Digest {
        Digest(self.0)
    }

    pub(crate) fn replace(&mut self, next: Digest) {
        self.0.zeroize();
        self.0 = next.0;
    }
}

impl fmt::Debug for SeedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SeedKey(..)")
    }
}
