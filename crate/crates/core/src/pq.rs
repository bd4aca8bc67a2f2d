//! Forward-secure hash-based signatures with oracle-supplied commitments.
//!
//! Each epoch `j` has a one-time HORS key derived from the chain key
//! `sk_j = H1^(j-1)(sk_1)`, `sk_1 = H0(msk || id)`. The signer reveals `k`
//! secrets selected by the message digest and then replaces `sk_j` with
//! `H1(sk_j)`. The matching `t`-element commitment is never sent by the
//! signer; the commitment oracle rebuilds it from `msk` and a table of
//! precomputed chain anchors.
//!
//! Secret `x` (0-based HORS index) is `H1(sk_j || x + 1)` and commitment
//! entry `x` is `H2` of that secret. Both sides use `H2` as the one-way
//! function.

use std::collections::BTreeMap;

use rand::{CryptoRng, RngCore};

use crate::codec::{digests, Reader};
use crate::error::{Error, Result, VerifyError};
use crate::hash::{be64, hash, hash_parts, iter_hash, Digest, Domain, DIGEST_LEN};
use crate::id::{ensure_distinct, SignerId, ID_LEN};
use crate::secret::{MasterKey, SeedKey};

pub const SIGNATURE_TAG: u8 = 0x01;
pub const COMMITMENT_TAG: u8 = 0x11;

/// Bit length of the per-index secrets.
pub const SECRET_BITS: usize = 256;

const HEADER_LEN: usize = 1 + ID_LEN + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PqParams {
    /// Revealed secrets per signature.
    pub k: usize,
    /// Commitment size; a power of two.
    pub t: usize,
    /// Precomputed anchors held by the oracle.
    pub j1: u64,
    /// Chain steps between anchors.
    pub j2: u64,
}

impl PqParams {
    pub fn new(k: usize, t: usize, j1: u64, j2: u64) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if !t.is_power_of_two() || t < 2 {
            return bad(format!("t = {t} must be a power of two >= 2"));
        }
        if t > u32::MAX as usize {
            return bad("t too large".into());
        }
        if k == 0 || k * t.trailing_zeros() as usize > SECRET_BITS {
            return bad(format!("k = {k} indices of {} bits exceed one digest", t.trailing_zeros()));
        }
        if j1 == 0 || j2 == 0 {
            return bad("J1 and J2 must be at least 1".into());
        }
        if j1.checked_mul(j2).is_none() {
            return bad("J1 * J2 overflows".into());
        }
        Ok(PqParams { k, t, j1, j2 })
    }

    /// `t = 1024, k = 16`.
    pub fn standard(j1: u64, j2: u64) -> Result<Self> {
        PqParams::new(16, 1024, j1, j2)
    }

    /// `t = 8, k = 4, J = 16` for exhaustive tests.
    pub fn toy() -> Self {
        PqParams { k: 4, t: 8, j1: 4, j2: 4 }
    }

    /// Total number of epochs `J = J1 * J2`.
    pub fn epochs(&self) -> u64 {
        self.j1 * self.j2
    }

    pub fn index_bits(&self) -> u32 {
        self.t.trailing_zeros()
    }

    /// Same `k`, `t`, `J` with a different anchor split.
    pub fn with_anchors(&self, j1: u64) -> Result<Self> {
        let total = self.epochs();
        if j1 == 0 || !total.is_multiple_of(j1) {
            return Err(Error::PolicyNotDivisor { j1, total });
        }
        PqParams::new(self.k, self.t, j1, total / j1)
    }

    pub(crate) const ENCODED_LEN: usize = 24;

    pub fn to_bytes(&self) -> [u8; 24] {
        let mut out = [0u8; 24];
        out[..4].copy_from_slice(&(self.k as u32).to_be_bytes());
        out[4..8].copy_from_slice(&(self.t as u32).to_be_bytes());
        out[8..16].copy_from_slice(&self.j1.to_be_bytes());
        out[16..].copy_from_slice(&self.j2.to_be_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let params = Self::read(&mut r)?;
        r.finish()?;
        Ok(params)
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self> {
        let k = r.u32()? as usize;
        let t = r.u32()? as usize;
        let j1 = r.u64()?;
        let j2 = r.u64()?;
        PqParams::new(k, t, j1, j2)
    }
}

/// Splits the first `k * log2(t)` bits of `digest`, most significant first,
/// into `k` big-endian indices in `[0, t - 1]`.
pub fn indices_from_digest(digest: &Digest, params: &PqParams) -> Vec<usize> {
    let bits = params.index_bits() as usize;
    let mask = params.t - 1;
    let mut out = Vec::with_capacity(params.k);
    let mut acc: u64 = 0;
    let mut have = 0usize;
    let mut bytes = digest.0.iter();
    for _ in 0..params.k {
        while have < bits {
            acc = (acc << 8) | *bytes.next().expect("k * log2(t) <= 256") as u64;
            have += 8;
        }
        out.push(((acc >> (have - bits)) as usize) & mask);
        have -= bits;
        acc &= (1u64 << have) - 1;
    }
    out
}

/// `H0(M)` sliced into HORS indices.
pub fn message_to_indices(message: &[u8], params: &PqParams) -> Vec<usize> {
    indices_from_digest(&hash(Domain::H0, message), params)
}

fn secret_at(sk: &Digest, index: usize) -> Digest {
    hash_parts(Domain::H1, &[&sk.0, &be64(index as u64 + 1)])
}

fn initial_seed(msk: &MasterKey, id: &SignerId) -> Digest {
    hash_parts(Domain::H0, &[msk.expose(), id.as_bytes()])
}

/// One-time public commitment for `(id, epoch)`: `t` hash images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PqCommitment {
    pub id: SignerId,
    pub epoch: u64,
    pub values: Vec<Digest>,
}

impl PqCommitment {
    /// Builds the commitment directly from the epoch's chain key.
    pub fn from_chain_key(id: SignerId, epoch: u64, sk: &Digest, t: usize) -> Self {
        let values = (0..t)
            .map(|x| hash(Domain::H2, &secret_at(sk, x).0))
            .collect();
        PqCommitment { id, epoch, values }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.values.len() * DIGEST_LEN);
        out.push(COMMITMENT_TAG);
        write_body(&mut out, &self.id, self.epoch, &self.values);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        r.expect_tag(COMMITMENT_TAG, "pq commitment")?;
        let (id, epoch, values) = read_body(&mut r, "pq commitment")?;
        Ok(PqCommitment { id, epoch, values })
    }
}

/// `k` revealed secrets plus the signing epoch and signer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PqSignature {
    pub id: SignerId,
    pub epoch: u64,
    pub values: Vec<Digest>,
}

impl PqSignature {
    /// Size of the revealed secrets alone, `k * 32` bytes.
    pub fn payload_len(&self) -> usize {
        self.values.len() * DIGEST_LEN
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload_len());
        out.push(SIGNATURE_TAG);
        write_body(&mut out, &self.id, self.epoch, &self.values);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        r.expect_tag(SIGNATURE_TAG, "pq signature")?;
        let (id, epoch, values) = read_body(&mut r, "pq signature")?;
        Ok(PqSignature { id, epoch, values })
    }

    /// Secrets only, for embedding under a shared header.
    pub(crate) fn write_payload(&self, out: &mut Vec<u8>) {
        for v in &self.values {
            out.extend_from_slice(&v.0);
        }
    }
}

fn write_body(out: &mut Vec<u8>, id: &SignerId, epoch: u64, values: &[Digest]) {
    out.extend_from_slice(id.as_bytes());
    out.extend_from_slice(&epoch.to_be_bytes());
    for v in values {
        out.extend_from_slice(&v.0);
    }
}

fn read_body(r: &mut Reader<'_>, what: &str) -> Result<(SignerId, u64, Vec<Digest>)> {
    let id = r.id()?;
    let epoch = r.u64()?;
    let rest = r.remaining();
    if rest == 0 || !rest.is_multiple_of(DIGEST_LEN) {
        return Err(Error::decode(format!("{what}: body is not a non-empty digest list")));
    }
    let values = digests(r, rest / DIGEST_LEN)?;
    Ok((id, epoch, values))
}

/// Signer-side state: current chain key and epoch.
///
/// Single writer. Each signature consumes one epoch; once `epoch > J` the
/// state refuses to sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PqSignerState {
    id: SignerId,
    sk: SeedKey,
    epoch: u64,
    params: PqParams,
}

impl PqSignerState {
    /// Fresh signer at epoch 1 holding `sk_1`.
    pub fn new(id: SignerId, sk1: SeedKey, params: PqParams) -> Self {
        PqSignerState { id, sk: sk1, epoch: 1, params }
    }

    pub fn id(&self) -> SignerId {
        self.id
    }

    /// Epoch the next signature will use.
    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn params(&self) -> &PqParams {
        &self.params
    }

    pub fn is_exhausted(&self) -> bool {
        self.epoch > self.params.epochs()
    }

    pub fn chain_key(&self) -> &SeedKey {
        &self.sk
    }

    /// `sk_{j+1} = H1(sk_j)`; the old key is overwritten.
    pub fn update(&mut self) -> Result<()> {
        if self.is_exhausted() {
            return Err(Error::EpochExhausted { max: self.params.epochs() });
        }
        let next = hash(Domain::H1, self.sk.expose());
        self.sk.replace(next);
        self.epoch += 1;
        Ok(())
    }

    /// Skips ahead to `target` without signing the epochs in between.
    pub fn fast_forward(&mut self, target: u64) -> Result<()> {
        let max = self.params.epochs();
        if target < self.epoch || target > max + 1 {
            return Err(Error::EpochOutOfRange { epoch: target, max });
        }
        while self.epoch < target {
            self.update()?;
        }
        Ok(())
    }

    /// Signs `message` at the current epoch, then evolves the key.
    ///
    /// Costs `1 + k + 1` hash calls.
    pub fn sign(&mut self, message: &[u8]) -> Result<PqSignature> {
        if self.is_exhausted() {
            return Err(Error::EpochExhausted { max: self.params.epochs() });
        }
        let sk = self.sk.to_digest();
        let values = message_to_indices(message, &self.params)
            .into_iter()
            .map(|x| secret_at(&sk, x))
            .collect();
        let sig = PqSignature { id: self.id, epoch: self.epoch, values };
        self.update()?;
        Ok(sig)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(PqParams::ENCODED_LEN + ID_LEN + 8 + DIGEST_LEN);
        out.extend_from_slice(&self.params.to_bytes());
        out.extend_from_slice(self.id.as_bytes());
        out.extend_from_slice(&self.epoch.to_be_bytes());
        out.extend_from_slice(self.sk.expose());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let s = Self::read(&mut r)?;
        r.finish()?;
        Ok(s)
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self> {
        let params = PqParams::read(r)?;
        let id = r.id()?;
        let epoch = r.u64()?;
        if epoch == 0 || epoch > params.epochs() + 1 {
            return Err(Error::decode("signer epoch out of range"));
        }
        let sk = SeedKey::from_digest(r.digest()?);
        Ok(PqSignerState { id, sk, epoch, params })
    }
}

/// Oracle-side secrets: master key plus per-signer chain anchors.
///
/// `anchors[id][i]` is `sk_{(i+1) * J2 + 1}`; anchor 0 (`sk_1`) is not
/// stored since it is one hash away from `msk`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PqKeyMaterial {
    msk: MasterKey,
    params: PqParams,
    anchors: BTreeMap<SignerId, Vec<Digest>>,
}

/// Output of [`keygen`]: oracle material and one signer state per id.
#[derive(Debug)]
pub struct PqKeys {
    pub material: PqKeyMaterial,
    pub signers: Vec<PqSignerState>,
}

pub fn keygen<R: RngCore + CryptoRng>(
    rng: &mut R,
    ids: &[SignerId],
    params: PqParams,
) -> Result<PqKeys> {
    keygen_with_master(MasterKey::generate(rng), ids, params)
}

/// Deterministic key generation from a given master key.
pub fn keygen_with_master(msk: MasterKey, ids: &[SignerId], params: PqParams) -> Result<PqKeys> {
    ensure_distinct(ids)?;
    let mut anchors = BTreeMap::new();
    let mut signers = Vec::with_capacity(ids.len());
    for id in ids {
        let sk1 = initial_seed(&msk, id);
        anchors.insert(*id, build_anchors(&sk1, &params));
        signers.push(PqSignerState::new(*id, SeedKey::from_digest(sk1), params));
    }
    Ok(PqKeys {
        material: PqKeyMaterial { msk, params, anchors },
        signers,
    })
}

fn build_anchors(sk1: &Digest, params: &PqParams) -> Vec<Digest> {
    let mut out = Vec::with_capacity(params.j1 as usize - 1);
    let mut cur = *sk1;
    for _ in 1..params.j1 {
        cur = iter_hash(Domain::H1, &cur, params.j2);
        out.push(cur);
    }
    out
}

impl PqKeyMaterial {
    pub fn params(&self) -> &PqParams {
        &self.params
    }

    pub fn master_key(&self) -> &MasterKey {
        &self.msk
    }

    pub fn ids(&self) -> impl Iterator<Item = &SignerId> {
        self.anchors.keys()
    }

    pub fn contains(&self, id: &SignerId) -> bool {
        self.anchors.contains_key(id)
    }

    pub fn anchors(&self, id: &SignerId) -> Option<&[Digest]> {
        self.anchors.get(id).map(Vec::as_slice)
    }

    /// Anchor storage per signer, `(J1 - 1) * 32` bytes.
    pub fn anchor_bytes_per_signer(&self) -> usize {
        (self.params.j1 as usize - 1) * DIGEST_LEN
    }

    /// Rebuilds `sk_j` from the nearest anchor and derives `C_j`.
    ///
    /// Walks at most `J2 - 1` chain steps.
    pub fn construct_commitment(&self, id: &SignerId, epoch: u64) -> Result<PqCommitment> {
        let anchors = self.anchors.get(id).ok_or(Error::UnknownId(*id))?;
        let max = self.params.epochs();
        if epoch == 0 || epoch > max {
            return Err(Error::EpochOutOfRange { epoch, max });
        }
        let block = (epoch - 1) / self.params.j2;
        let offset = (epoch - 1) % self.params.j2;
        let base = match block {
            0 => initial_seed(&self.msk, id),
            b => anchors[b as usize - 1],
        };
        let sk = iter_hash(Domain::H1, &base, offset);
        Ok(PqCommitment::from_chain_key(*id, epoch, &sk, self.params.t))
    }

    /// Re-splits `J` as `j1 * (J / j1)` and rebuilds every anchor table.
    pub fn set_storage_policy(&mut self, j1: u64) -> Result<()> {
        let params = self.params.with_anchors(j1)?;
        for (id, table) in self.anchors.iter_mut() {
            *table = build_anchors(&initial_seed(&self.msk, id), &params);
        }
        self.params = params;
        Ok(())
    }

    /// Layout: params, msk, signer count (u32), then per signer the id and
    /// its `J1 - 1` anchors.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&self.params.to_bytes());
        out.extend_from_slice(self.msk.expose());
        out.extend_from_slice(&(self.anchors.len() as u32).to_be_bytes());
        for (id, table) in &self.anchors {
            out.extend_from_slice(id.as_bytes());
            for a in table {
                out.extend_from_slice(&a.0);
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let m = Self::read(&mut r)?;
        r.finish()?;
        Ok(m)
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self> {
        let params = PqParams::read(r)?;
        let msk = MasterKey::from_bytes(r.digest()?.0);
        let n = r.u32()? as usize;
        let per = params.j1 as usize - 1;
        let mut anchors = BTreeMap::new();
        for _ in 0..n {
            let id = r.id()?;
            let table = digests(r, per)?;
            if anchors.insert(id, table).is_some() {
                return Err(Error::DuplicateId(id));
            }
        }
        Ok(PqKeyMaterial { msk, params, anchors })
    }
}

/// Checks `sigma` on `message` against `commitment`.
///
/// Accepts iff both name the same signer and epoch, the epoch lies in
/// `[1, J]`, the sizes match `(k, t)`, and `H2(s_i) = v[x_i]` for every
/// index derived from `message`.
pub fn verify(
    params: &PqParams,
    commitment: &PqCommitment,
    message: &[u8],
    sigma: &PqSignature,
) -> std::result::Result<(), VerifyError> {
    if commitment.id != sigma.id {
        return Err(VerifyError::SignerMismatch);
    }
    if commitment.epoch != sigma.epoch {
        return Err(VerifyError::EpochMismatch {
            commitment: commitment.epoch,
            signature: sigma.epoch,
        });
    }
    if sigma.epoch == 0 || sigma.epoch > params.epochs() {
        return Err(VerifyError::EpochOutOfRange(sigma.epoch));
    }
    if commitment.values.len() != params.t {
        return Err(VerifyError::Shape("commitment does not hold t values"));
    }
    if sigma.values.len() != params.k {
        return Err(VerifyError::Shape("signature does not hold k values"));
    }
    let indices = message_to_indices(message, params);
    let ok = indices
        .iter()
        .zip(&sigma.values)
        .all(|(&x, s)| hash(Domain::H2, &s.0) == commitment.values[x]);
    if ok {
        Ok(())
    } else {
        Err(VerifyError::Invalid)
    }
}
