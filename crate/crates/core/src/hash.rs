//! Domain-separated hashing.
//!
//! The three oracles `H0`, `H1`, `H2` are all SHA-256 with a one-byte domain
//! prefix: `H_k(x) = SHA-256(k || x)`. Integer fields that feed a hash are
//! encoded as 8-byte big-endian (see [`be64`]).
//!
//! Every primitive evaluation bumps a per-thread counter so benchmarks and
//! tests can assert exact hash budgets. Counters are thread-local: a reading
//! only covers work done on the calling thread since the last
//! [`reset_counters`].

use std::cell::Cell;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use sha2::{Digest as _, Sha256};

pub const DIGEST_LEN: usize = 32;

/// One of the three hash domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Domain {
    H0 = 0,
    H1 = 1,
    H2 = 2,
}

impl Domain {
    pub fn from_index(k: u8) -> Option<Domain> {
        match k {
            0 => Some(Domain::H0),
            1 => Some(Domain::H1),
            2 => Some(Domain::H2),
            _ => None,
        }
    }
}

/// 32-byte hash output.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Digest(pub [u8; DIGEST_LEN]);

impl Digest {
    pub fn as_bytes(&self) -> &[u8; DIGEST_LEN] {
        &self.0
    }

    pub fn from_slice(bytes: &[u8]) -> Option<Digest> {
        bytes.try_into().ok().map(Digest)
    }
}

impl AsRef<[u8]> for Digest {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest(")?;
        for b in &self.0[..8] {
            write!(f, "{b:02x}")?;
        }
        write!(f, "..)")
    }
}

/// Per-domain call tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HashCounters {
    pub calls_h0: u64,
    pub calls_h1: u64,
    pub calls_h2: u64,
}

impl HashCounters {
    pub fn total(&self) -> u64 {
        self.calls_h0 + self.calls_h1 + self.calls_h2
    }

    /// Component-wise difference against an earlier snapshot.
    pub fn since(&self, earlier: &HashCounters) -> HashCounters {
        HashCounters {
            calls_h0: self.calls_h0 - earlier.calls_h0,
            calls_h1: self.calls_h1 - earlier.calls_h1,
            calls_h2: self.calls_h2 - earlier.calls_h2,
        }
    }
}

thread_local! {
    static COUNTERS: Cell<HashCounters> = const { Cell::new(HashCounters { calls_h0: 0, calls_h1: 0, calls_h2: 0 }) };
}

fn bump(domain: Domain) {
    COUNTERS.with(|c| {
        let mut v = c.get();
        match domain {
            Domain::H0 => v.calls_h0 += 1,
            Domain::H1 => v.calls_h1 += 1,
            Domain::H2 => v.calls_h2 += 1,
        }
        c.set(v);
    });
}

/// Snapshot of this thread's counters.
pub fn counters() -> HashCounters {
    COUNTERS.with(|c| c.get())
}

pub fn reset_counters() {
    COUNTERS.with(|c| c.set(HashCounters::default()));
}

/// Runs `f` and returns its result with the hash calls it made.
pub fn count_calls<T>(f: impl FnOnce() -> T) -> (T, HashCounters) {
    let before = counters();
    let out = f();
    (out, counters().since(&before))
}

/// 8-byte big-endian encoding used for epochs and indices inside hash inputs.
#[inline]
pub fn be64(x: u64) -> [u8; 8] {
    x.to_be_bytes()
}

/// `H_k(data)`.
pub fn hash(domain: Domain, data: &[u8]) -> Digest {
    hash_parts(domain, &[data])
}

/// `H_k(p_1 || p_2 || ...)` without materialising the concatenation.
/// Counts as a single call.
pub fn hash_parts(domain: Domain, parts: &[&[u8]]) -> Digest {
    bump(domain);
    let mut h = Sha256::new();
    h.update([domain as u8]);
    for p in parts {
        h.update(p);
    }
    Digest(h.finalize().into())
}

/// `H_k` applied `n` times; `n = 0` returns `seed` untouched.
pub fn iter_hash(domain: Domain, seed: &Digest, n: u64) -> Digest {
    let mut acc = *seed;
    for _ in 0..n {
        acc = hash(domain, &acc.0);
    }
    acc
}

/// Hashes `parts` and reduces the digest (big-endian) modulo `q` into `[1, q-1]`.
///
/// A zero reduction is retried with a one-byte counter appended to the
/// input, starting at 1.
pub fn hash_to_scalar(domain: Domain, parts: &[&[u8]], q: &BigUint) -> BigUint {
    assert!(*q > BigUint::from(2u8), "group order must exceed 2");
    let v = BigUint::from_bytes_be(&hash_parts(domain, parts).0) % q;
    if !v.is_zero() {
        return v;
    }
    let mut data = parts.concat();
    data.push(0);
    for ctr in 1..=u8::MAX {
        *data.last_mut().unwrap() = ctr;
        let v = BigUint::from_bytes_be(&hash(domain, &data).0) % q;
        if !v.is_zero() {
            return v;
        }
    }
    unreachable!("255 consecutive zero reductions")
}
