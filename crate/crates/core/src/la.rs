//! Single-signer aggregate signatures with oracle-supplied commitments.
//!
//! Key: `y = H0(msk || id) mod q`, `Y = alpha^y`. For batch `j` the signer
//! derives a seed `x_j = H0(y || j)` and nonce seed `r_j = H1(y || j)`, then
//! per message `l`:
//!
//! ```text
//! x_j^l = H0(x_j || l)
//! r_j^l = H1(r_j || l) mod q
//! e_j^l = H2(m^l || x_j^l) mod q
//! s_j^l = r_j^l - e_j^l * y mod q
//! ```
//!
//! and outputs `s = sum s_j^l` with `x_j`. The oracle rebuilds
//! `R = alpha^(sum r_j^l)` from `msk`; the verifier checks
//! `R = Y^(sum e_j^l) * alpha^s`. The signer never exponentiates.
//!
//! `y` is fed to the hash as its 32-byte big-endian encoding; `j` and `l`
//! as 8-byte big-endian.

use std::collections::BTreeMap;

use rand::{CryptoRng, RngCore};

use crate::codec::Reader;
use crate::error::{Error, Result, VerifyError};
use crate::group::{Group, GroupElement, Scalar, ELEMENT_LEN, SCALAR_LEN};
use crate::hash::{be64, hash_parts, Digest, Domain, DIGEST_LEN};
use crate::id::{ensure_distinct, SignerId, ID_LEN};
use crate::secret::MasterKey;

pub const SIGNATURE_TAG: u8 = 0x02;
pub const COMMITMENT_TAG: u8 = 0x12;

/// Encoded [`LaAggSignature`] length.
pub const SIGNATURE_LEN: usize = 1 + ID_LEN + 8 + SCALAR_LEN + DIGEST_LEN;
/// Encoded [`LaCommitment`] length.
pub const COMMITMENT_LEN: usize = 1 + ID_LEN + 8 + 4 + ELEMENT_LEN;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaParams {
    pub group: Group,
    /// Maximum number of batches `J`.
    pub epochs: u64,
    /// Messages per batch `L`.
    pub batch_len: usize,
}

impl LaParams {
    pub fn new(group: Group, epochs: u64, batch_len: usize) -> Result<Self> {
        if epochs == 0 || batch_len == 0 {
            return Err(Error::InvalidParams("J and L must be at least 1".into()));
        }
        if batch_len > u32::MAX as usize {
            return Err(Error::InvalidParams("L does not fit 32 bits".into()));
        }
        Ok(LaParams { group, epochs, batch_len })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.group.encode();
        out.extend_from_slice(&self.epochs.to_be_bytes());
        out.extend_from_slice(&(self.batch_len as u32).to_be_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let params = Self::read(&mut r)?;
        r.finish()?;
        Ok(params)
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self> {
        let (group, used) = Group::decode(r.peek())?;
        r.take(used)?;
        let epochs = r.u64()?;
        let batch_len = r.u32()? as usize;
        LaParams::new(group, epochs, batch_len)
    }
}

/// `sum parts mod q`.
pub fn aggregate(group: &Group, parts: &[Scalar]) -> Scalar {
    parts
        .iter()
        .fold(Scalar::default(), |acc, s| group.scalar_add(&acc, s))
}

fn derive_private(group: &Group, msk: &MasterKey, id: &SignerId) -> Scalar {
    group.hash_to_scalar(Domain::H0, &[msk.expose(), id.as_bytes()])
}

fn epoch_seeds(y: &Scalar, epoch: u64) -> (Digest, Digest) {
    let y = y.to_bytes();
    let j = be64(epoch);
    (
        hash_parts(Domain::H0, &[&y, &j]),
        hash_parts(Domain::H1, &[&y, &j]),
    )
}

fn nonce(group: &Group, nonce_seed: &Digest, l: u64) -> Scalar {
    group.hash_to_scalar(Domain::H1, &[&nonce_seed.0, &be64(l)])
}

fn message_seed(seed: &Digest, l: u64) -> Digest {
    hash_parts(Domain::H0, &[&seed.0, &be64(l)])
}

fn challenge(group: &Group, message: &[u8], msg_seed: &Digest) -> Scalar {
    group.hash_to_scalar(Domain::H2, &[message, &msg_seed.0])
}

/// Aggregate signature over one batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaAggSignature {
    pub id: SignerId,
    pub epoch: u64,
    pub s_agg: Scalar,
    pub seed: Digest,
}

impl LaAggSignature {
    /// Cryptographic payload: aggregate scalar and seed.
    pub const PAYLOAD_LEN: usize = SCALAR_LEN + DIGEST_LEN;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(SIGNATURE_LEN);
        out.push(SIGNATURE_TAG);
        out.extend_from_slice(self.id.as_bytes());
        out.extend_from_slice(&self.epoch.to_be_bytes());
        self.write_payload(&mut out);
        out
    }

    pub(crate) fn write_payload(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.s_agg.to_bytes());
        out.extend_from_slice(&self.seed.0);
    }

    pub fn from_bytes(bytes: &[u8], group: &Group) -> Result<Self> {
        let mut r = Reader::new(bytes);
        r.expect_tag(SIGNATURE_TAG, "aggregate signature")?;
        let id = r.id()?;
        let epoch = r.u64()?;
        let sig = Self::read_payload(&mut r, group, id, epoch)?;
        r.finish()?;
        Ok(sig)
    }

    pub(crate) fn read_payload(
        r: &mut Reader<'_>,
        group: &Group,
        id: SignerId,
        epoch: u64,
    ) -> Result<Self> {
        let s_agg = group.decode_scalar(r.take(SCALAR_LEN)?)?;
        let seed = r.digest()?;
        Ok(LaAggSignature { id, epoch, s_agg, seed })
    }
}

/// Aggregate commitment `R = alpha^(sum r_j^l)` for one batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaCommitment {
    pub id: SignerId,
    pub epoch: u64,
    pub batch_len: u32,
    pub element: GroupElement,
}

impl LaCommitment {
    pub fn to_bytes(&self, group: &Group) -> Vec<u8> {
        let mut out = Vec::with_capacity(COMMITMENT_LEN);
        out.push(COMMITMENT_TAG);
        out.extend_from_slice(self.id.as_bytes());
        out.extend_from_slice(&self.epoch.to_be_bytes());
        out.extend_from_slice(&self.batch_len.to_be_bytes());
        out.extend_from_slice(&group.encode_element(&self.element));
        out
    }

    pub fn from_bytes(bytes: &[u8], group: &Group) -> Result<Self> {
        let mut r = Reader::new(bytes);
        r.expect_tag(COMMITMENT_TAG, "aggregate commitment")?;
        let id = r.id()?;
        let epoch = r.u64()?;
        let batch_len = r.u32()?;
        let element = group.decode_element(r.take(ELEMENT_LEN)?)?;
        r.finish()?;
        Ok(LaCommitment { id, epoch, batch_len, element })
    }
}

/// Builds the batch commitment from the signer's private scalar.
pub fn commitment_for_key(
    group: &Group,
    id: SignerId,
    y: &Scalar,
    epoch: u64,
    batch_len: u32,
) -> LaCommitment {
    let (_, nonce_seed) = epoch_seeds(y, epoch);
    let r_sum = (1..=batch_len as u64)
        .map(|l| nonce(group, &nonce_seed, l))
        .fold(Scalar::default(), |acc, r| group.scalar_add(&acc, &r));
    LaCommitment {
        id,
        epoch,
        batch_len,
        element: group.exp_generator(&r_sum),
    }
}

/// Signer state: private scalar and batch counter. Single writer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaSignerState {
    id: SignerId,
    y: Scalar,
    epoch: u64,
    params: LaParams,
}

impl LaSignerState {
    /// Signer at batch 1. `y` must be nonzero and reduced.
    pub fn new(id: SignerId, y: Scalar, params: LaParams) -> Result<Self> {
        if y.is_zero() || y.value() >= params.group.order() {
            return Err(Error::InvalidParams("private scalar outside [1, q-1]".into()));
        }
        Ok(LaSignerState { id, y, epoch: 1, params })
    }

    pub fn id(&self) -> SignerId {
        self.id
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn params(&self) -> &LaParams {
        &self.params
    }

    pub fn private_scalar(&self) -> &Scalar {
        &self.y
    }

    pub fn public_key(&self) -> GroupElement {
        self.params.group.exp_generator(&self.y)
    }

    pub fn is_exhausted(&self) -> bool {
        self.epoch > self.params.epochs
    }

    pub fn fast_forward(&mut self, target: u64) -> Result<()> {
        let max = self.params.epochs;
        if target < self.epoch || target > max + 1 {
            return Err(Error::EpochOutOfRange { epoch: target, max });
        }
        self.epoch = target;
        Ok(())
    }

    fn check_batch<M: AsRef<[u8]>>(&self, batch: &[M]) -> Result<()> {
        if self.is_exhausted() {
            return Err(Error::EpochExhausted { max: self.params.epochs });
        }
        if batch.len() != self.params.batch_len {
            return Err(Error::BatchLength {
                expected: self.params.batch_len,
                got: batch.len(),
            });
        }
        Ok(())
    }

    /// Per-message scalars `s_j^l` for the current batch, without advancing.
    pub fn per_message_scalars<M: AsRef<[u8]>>(&self, batch: &[M]) -> Result<(Digest, Vec<Scalar>)> {
        self.check_batch(batch)?;
        let g = &self.params.group;
        let (seed, nonce_seed) = epoch_seeds(&self.y, self.epoch);
        let parts = batch
            .iter()
            .zip(1u64..)
            .map(|(m, l)| {
                let r = nonce(g, &nonce_seed, l);
                let e = challenge(g, m.as_ref(), &message_seed(&seed, l));
                g.scalar_sub(&r, &g.scalar_mul(&e, &self.y))
            })
            .collect();
        Ok((seed, parts))
    }

    /// Signs a full batch of exactly `L` messages and advances the counter.
    pub fn sign<M: AsRef<[u8]>>(&mut self, batch: &[M]) -> Result<LaAggSignature> {
        let (seed, parts) = self.per_message_scalars(batch)?;
        let g = &self.params.group;
        let s_agg = parts
            .iter()
            .fold(Scalar::default(), |acc, s| aggregate(g, &[acc, s.clone()]));
        let sig = LaAggSignature { id: self.id, epoch: self.epoch, s_agg, seed };
        self.epoch += 1;
        Ok(sig)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.params.to_bytes();
        out.extend_from_slice(self.id.as_bytes());
        out.extend_from_slice(&self.epoch.to_be_bytes());
        out.extend_from_slice(&self.y.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let s = Self::read(&mut r)?;
        r.finish()?;
        Ok(s)
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self> {
        let params = LaParams::read(r)?;
        let id = r.id()?;
        let epoch = r.u64()?;
        if epoch == 0 || epoch > params.epochs + 1 {
            return Err(Error::decode("signer epoch out of range"));
        }
        let y = params.group.decode_scalar(r.take(SCALAR_LEN)?)?;
        let mut s = LaSignerState::new(id, y, params)?;
        s.epoch = epoch;
        Ok(s)
    }
}

/// Oracle-side material: master key and the registered signers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaMaster {
    msk: MasterKey,
    params: LaParams,
    public_keys: BTreeMap<SignerId, GroupElement>,
}

#[derive(Debug)]
pub struct LaKeys {
    pub master: LaMaster,
    pub signers: Vec<LaSignerState>,
}

pub fn keygen<R: RngCore + CryptoRng>(
    rng: &mut R,
    ids: &[SignerId],
    params: LaParams,
) -> Result<LaKeys> {
    keygen_with_master(MasterKey::generate(rng), ids, params)
}

pub fn keygen_with_master(msk: MasterKey, ids: &[SignerId], params: LaParams) -> Result<LaKeys> {
    ensure_distinct(ids)?;
    let mut public_keys = BTreeMap::new();
    let mut signers = Vec::with_capacity(ids.len());
    for id in ids {
        let y = derive_private(&params.group, &msk, id);
        let signer = LaSignerState::new(*id, y, params.clone())?;
        public_keys.insert(*id, signer.public_key());
        signers.push(signer);
    }
    Ok(LaKeys {
        master: LaMaster { msk, params, public_keys },
        signers,
    })
}

impl LaMaster {
    pub fn params(&self) -> &LaParams {
        &self.params
    }

    pub fn master_key(&self) -> &MasterKey {
        &self.msk
    }

    pub fn ids(&self) -> impl Iterator<Item = &SignerId> {
        self.public_keys.keys()
    }

    pub fn contains(&self, id: &SignerId) -> bool {
        self.public_keys.contains_key(id)
    }

    pub fn public_key(&self, id: &SignerId) -> Option<&GroupElement> {
        self.public_keys.get(id)
    }

    pub fn public_keys(&self) -> &BTreeMap<SignerId, GroupElement> {
        &self.public_keys
    }

    /// `R_j = alpha^(sum_{l=1..L} r_j^l)` for a registered signer.
    pub fn construct_commitment(&self, id: &SignerId, epoch: u64) -> Result<LaCommitment> {
        if !self.contains(id) {
            return Err(Error::UnknownId(*id));
        }
        let max = self.params.epochs;
        if epoch == 0 || epoch > max {
            return Err(Error::EpochOutOfRange { epoch, max });
        }
        let y = derive_private(&self.params.group, &self.msk, id);
        Ok(commitment_for_key(
            &self.params.group,
            *id,
            &y,
            epoch,
            self.params.batch_len as u32,
        ))
    }

    /// Layout: params, msk, signer count (u32), ids. Public keys are
    /// recomputed on load.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.params.to_bytes();
        out.extend_from_slice(self.msk.expose());
        out.extend_from_slice(&(self.public_keys.len() as u32).to_be_bytes());
        for id in self.public_keys.keys() {
            out.extend_from_slice(id.as_bytes());
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
        let params = LaParams::read(r)?;
        let msk = MasterKey::from_bytes(r.digest()?.0);
        let n = r.u32()? as usize;
        let ids = (0..n).map(|_| r.id()).collect::<Result<Vec<_>>>()?;
        Ok(keygen_with_master(msk, &ids, params)?.master)
    }
}

/// Checks an aggregate signature over `batch`.
///
/// Structural checks (signer, epoch, batch length) run before any group
/// operation. Then accepts iff `R = Y^(sum e^l) * alpha^s`.
pub fn verify<M: AsRef<[u8]>>(
    group: &Group,
    public_key: &GroupElement,
    commitment: &LaCommitment,
    batch: &[M],
    sigma: &LaAggSignature,
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
    if sigma.epoch == 0 {
        return Err(VerifyError::EpochOutOfRange(0));
    }
    if batch.len() != commitment.batch_len as usize {
        return Err(VerifyError::Shape("batch length differs from the commitment"));
    }
    let e_agg = batch
        .iter()
        .zip(1u64..)
        .map(|(m, l)| challenge(group, m.as_ref(), &message_seed(&sigma.seed, l)))
        .fold(Scalar::default(), |acc, e| group.scalar_add(&acc, &e));
    let rhs = group.mul(
        &group.exp(public_key, &e_agg),
        &group.exp_generator(&sigma.s_agg),
    );
    if rhs == commitment.element {
        Ok(())
    } else {
        Err(VerifyError::Invalid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(n: u8) -> SignerId {
        SignerId([n; ID_LEN])
    }

    fn tiny_params(l: usize) -> LaParams {
        LaParams::new(Group::small_test(), 8, l).unwrap()
    }

    #[test]
    fn tiny_keygen_trace() {
        // Independent oracle: SHA-256(0x00 || msk || 0^16) mod 11 == 3 for
        // msk = 7 as a 32-byte big-endian integer.
        let mut msk = [0u8; 32];
        msk[31] = 7;
        let keys = keygen_with_master(MasterKey::from_bytes(msk), &[SignerId::default()], tiny_params(1)).unwrap();
        let g = Group::small_test();
        assert_eq!(keys.signers[0].private_scalar(), &g.scalar(3u8));
        assert_eq!(keys.signers[0].public_key(), GroupElement::ModP(8));
        let y_pub = keys.master.public_key(&SignerId::default()).unwrap();
        assert_eq!(g.exp(y_pub, &g.scalar(11u8)), g.identity());
    }

    #[test]
    fn hand_traced_schnorr_identity() {
        // y = 3, r = 5, e = 4 in the p = 23, q = 11 group
        let g = Group::small_test();
        let (y, r, e) = (g.scalar(3u8), g.scalar(5u8), g.scalar(4u8));
        let s = g.scalar_sub(&r, &g.scalar_mul(&e, &y));
        assert_eq!(s, g.scalar(4u8));
        let big_y = g.exp_generator(&y);
        assert_eq!(big_y, GroupElement::ModP(8));
        let lhs = g.mul(&g.exp(&big_y, &e), &g.exp_generator(&s));
        assert_eq!(lhs, GroupElement::ModP(9));
        assert_eq!(g.exp_generator(&r), lhs);
    }

    #[test]
    fn aggregate_vectors() {
        let g = Group::small_test();
        let parts: Vec<_> = [4u8, 9, 5].iter().map(|&v| g.scalar(v)).collect();
        assert_eq!(aggregate(&g, &parts), g.scalar(7u8));
        assert_eq!(aggregate(&g, &parts[..1]), parts[0]);
        let rev: Vec<_> = parts.iter().rev().cloned().collect();
        assert_eq!(aggregate(&g, &rev), aggregate(&g, &parts));
    }

    #[test]
    fn running_sum_equals_aggregate_of_parts() {
        let keys = keygen_with_master(MasterKey::from_bytes([5; 32]), &[id(1)], LaParams::new(Group::production(), 4, 5).unwrap()).unwrap();
        let mut s = keys.signers[0].clone();
        let batch = [b"a".as_slice(), b"b", b"c", b"d", b"e"];
        let (seed, parts) = s.per_message_scalars(&batch).unwrap();
        let sig = s.sign(&batch).unwrap();
        assert_eq!(sig.seed, seed);
        assert_eq!(sig.s_agg, aggregate(&Group::production(), &parts));
    }

    #[test]
    fn per_message_identity_holds() {
        let g = Group::production();
        let keys = keygen_with_master(MasterKey::from_bytes([6; 32]), &[id(1)], LaParams::new(g.clone(), 4, 3).unwrap()).unwrap();
        let s = &keys.signers[0];
        let batch = [b"x".as_slice(), b"y", b"z"];
        let (seed, parts) = s.per_message_scalars(&batch).unwrap();
        let (_, nonce_seed) = epoch_seeds(s.private_scalar(), 1);
        for (l, (m, part)) in (1u64..).zip(batch.iter().zip(&parts)) {
            let e = challenge(&g, m, &message_seed(&seed, l));
            let r = nonce(&g, &nonce_seed, l);
            assert_eq!(
                g.exp_generator(&r),
                g.mul(&g.exp(&s.public_key(), &e), &g.exp_generator(part))
            );
        }
    }

    #[test]
    fn commitment_is_product_of_nonce_commitments() {
        let g = Group::production();
        let keys = keygen_with_master(MasterKey::from_bytes([8; 32]), &[id(1)], LaParams::new(g.clone(), 4, 4).unwrap()).unwrap();
        let c = keys.master.construct_commitment(&id(1), 2).unwrap();
        let y = keys.signers[0].private_scalar();
        let (_, nonce_seed) = epoch_seeds(y, 2);
        let prod = (1..=4u64).fold(g.identity(), |acc, l| {
            g.mul(&acc, &g.exp_generator(&nonce(&g, &nonce_seed, l)))
        });
        assert_eq!(c.element, prod);
    }

    #[test]
    fn honest_batches_verify_and_signing_is_deterministic() {
        let g = Group::production();
        let keys = keygen_with_master(MasterKey::from_bytes([1; 32]), &[id(1), id(2)], LaParams::new(g.clone(), 3, 2).unwrap()).unwrap();
        let mut s = keys.signers[1].clone();
        let mut replay = s.clone();
        let y_pub = keys.master.public_key(&id(2)).unwrap();
        for j in 1..=3u64 {
            let batch = [format!("t{j}a"), format!("t{j}b")];
            let sig = s.sign(&batch).unwrap();
            let c = keys.master.construct_commitment(&id(2), j).unwrap();
            assert_eq!(verify(&g, y_pub, &c, &batch, &sig), Ok(()));
        }
        assert!(s.is_exhausted());
        assert_eq!(s.sign(&[b"a", b"b"]), Err(Error::EpochExhausted { max: 3 }));
        let first = keys.signers[1].clone().sign(&["t1a", "t1b"]).unwrap();
        assert_eq!(replay.sign(&["t1a", "t1b"]).unwrap(), first);
    }

    #[test]
    fn batch_length_is_enforced() {
        let keys = keygen_with_master(MasterKey::from_bytes([1; 32]), &[id(1)], tiny_params(3)).unwrap();
        let mut s = keys.signers[0].clone();
        assert_eq!(s.sign(&[b"a", b"b"]), Err(Error::BatchLength { expected: 3, got: 2 }));
        let batch = [b"a", b"b", b"c"];
        let sig = s.sign(&batch).unwrap();
        let c = keys.master.construct_commitment(&id(1), 1).unwrap();
        let y_pub = keys.master.public_key(&id(1)).unwrap();
        let err = verify(&Group::small_test(), y_pub, &c, &batch[..2], &sig).unwrap_err();
        assert!(err.is_structural());
    }

    #[test]
    fn structural_mismatches_rejected() {
        let g = Group::production();
        let keys = keygen_with_master(MasterKey::from_bytes([2; 32]), &[id(1), id(2)], LaParams::new(g.clone(), 4, 1).unwrap()).unwrap();
        let sig = keys.signers[0].clone().sign(&[b"m"]).unwrap();
        let y_pub = keys.master.public_key(&id(1)).unwrap();
        let c2 = keys.master.construct_commitment(&id(1), 2).unwrap();
        assert!(matches!(verify(&g, y_pub, &c2, &[b"m"], &sig), Err(VerifyError::EpochMismatch { .. })));
        let other = keys.master.construct_commitment(&id(2), 1).unwrap();
        assert_eq!(verify(&g, y_pub, &other, &[b"m"], &sig), Err(VerifyError::SignerMismatch));
        assert_eq!(keys.master.construct_commitment(&id(3), 1), Err(Error::UnknownId(id(3))));
        assert!(keys.master.construct_commitment(&id(1), 5).is_err());
    }

    #[test]
    fn encodings_round_trip() {
        for g in [Group::small_test(), Group::production()] {
            let keys = keygen_with_master(MasterKey::from_bytes([4; 32]), &[id(1), id(9)], LaParams::new(g.clone(), 4, 2).unwrap()).unwrap();
            assert_eq!(LaMaster::from_bytes(&keys.master.to_bytes()).unwrap(), keys.master);
            let mut s = keys.signers[0].clone();
            let sig = s.sign(&[b"a", b"b"]).unwrap();
            assert_eq!(LaSignerState::from_bytes(&s.to_bytes()).unwrap(), s);
            let enc = sig.to_bytes();
            assert_eq!(enc.len(), SIGNATURE_LEN);
            assert_eq!(LaAggSignature::from_bytes(&enc, &g).unwrap(), sig);
            let c = keys.master.construct_commitment(&id(1), 1).unwrap();
            let enc = c.to_bytes(&g);
            assert_eq!(enc.len(), COMMITMENT_LEN);
            assert_eq!(LaCommitment::from_bytes(&enc, &g).unwrap(), c);
        }
        assert_eq!(LaAggSignature::PAYLOAD_LEN, 64);
    }
}
