//! Deterministic fixtures shared by the criterion benches.

use hases_core::hy::{self, HyKeys, HyParams};
use hases_core::la::{self, LaKeys, LaParams};
use hases_core::pq::{self, PqKeys, PqParams};
use hases_core::{Group, SignerId};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Single-signer id used by every fixture.
pub const SIGNER: SignerId = SignerId([0x42; 16]);

fn rng(tag: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(0x6861_7365_7300 ^ tag)
}

/// `len` distinct sensor-sized messages for batch `i`.
pub fn batch(i: u64, len: usize) -> Vec<Vec<u8>> {
    (0..len)
        .map(|l| format!("t={i} l={l} ax=0.031 ay=-0.982 az=0.117").into_bytes())
        .collect()
}

pub fn pq_keys(j1: u64, j2: u64) -> (PqParams, PqKeys) {
    let params = PqParams::standard(j1, j2).expect("valid pq params");
    (params, pq::keygen(&mut rng(1), &[SIGNER], params).expect("keygen"))
}

pub fn la_keys(epochs: u64, batch_len: usize) -> (LaParams, LaKeys) {
    let params = LaParams::new(Group::production(), epochs, batch_len).expect("valid la params");
    (params.clone(), la::keygen(&mut rng(2), &[SIGNER], params).expect("keygen"))
}

pub fn hy_keys(j1: u64, j2: u64, batch_len: usize) -> (HyParams, HyKeys) {
    let pq = PqParams::standard(j1, j2).expect("valid pq params");
    let params = HyParams::new(Group::production(), batch_len, pq).expect("valid hy params");
    let keys = hy::keygen(&mut rng(3), &[SIGNER], &params).expect("keygen");
    (params, keys)
}
