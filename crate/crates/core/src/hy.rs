//! Hybrid scheme: an aggregate signature over the nested batch digest,
//! wrapped by a forward-secure hash-based signature.
//!
//! For a batch `m_1..m_L` the nested digests are
//! `n_1 = H0(m_1)`, `n_l = H0(m_l || H0(n_{l-1}))`. The aggregate layer signs
//! `(n_1, .., n_L)`; the hash-based layer signs `s || n_L` (32-byte
//! big-endian aggregate scalar followed by the last nested digest). A
//! signature verifies only if both layers do.

use rand::{CryptoRng, RngCore};

use crate::codec::Reader;
use crate::error::{Error, Result, VerifyError};
use crate::group::{Group, GroupElement, ELEMENT_LEN, SCALAR_LEN};
use crate::hash::{hash, hash_parts, Digest, Domain, DIGEST_LEN};
use crate::id::{SignerId, ID_LEN};
use crate::la::{self, LaAggSignature, LaCommitment, LaMaster, LaParams, LaSignerState};
use crate::pq::{self, PqCommitment, PqKeyMaterial, PqParams, PqSignature, PqSignerState};
use crate::secret::MasterKey;

pub const SIGNATURE_TAG: u8 = 0x03;
pub const COMMITMENT_TAG: u8 = 0x13;

/// Shared `id || j` header.
pub const HEADER_LEN: usize = ID_LEN + 8;

/// Order-binding running digest of a batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedDigest {
    pub chain: Vec<Digest>,
}

impl NestedDigest {
    pub fn last(&self) -> &Digest {
        self.chain.last().expect("nested digest is never empty")
    }
}

pub fn nest<M: AsRef<[u8]>>(batch: &[M]) -> Result<NestedDigest> {
    let (first, rest) = batch.split_first().ok_or(Error::EmptyBatch)?;
    let mut chain = Vec::with_capacity(batch.len());
    chain.push(hash(Domain::H0, first.as_ref()));
    for m in rest {
        let prev = hash(Domain::H0, &chain.last().unwrap().0);
        chain.push(hash_parts(Domain::H0, &[m.as_ref(), &prev.0]));
    }
    Ok(NestedDigest { chain })
}

/// Message handed to the hash-based layer: `s_agg || n_L`.
pub fn inner_message(sigma: &LaAggSignature, last: &Digest) -> [u8; SCALAR_LEN + DIGEST_LEN] {
    let mut out = [0u8; SCALAR_LEN + DIGEST_LEN];
    out[..SCALAR_LEN].copy_from_slice(&sigma.s_agg.to_bytes());
    out[SCALAR_LEN..].copy_from_slice(&last.0);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyParams {
    pub group: Group,
    pub batch_len: usize,
    pub pq: PqParams,
}

impl HyParams {
    pub fn new(group: Group, batch_len: usize, pq: PqParams) -> Result<Self> {
        LaParams::new(group.clone(), pq.epochs(), batch_len)?;
        Ok(HyParams { group, batch_len, pq })
    }

    /// Aggregate-layer parameters sized for the same `J`.
    pub fn la(&self) -> LaParams {
        LaParams {
            group: self.group.clone(),
            epochs: self.pq.epochs(),
            batch_len: self.batch_len,
        }
    }

    pub fn epochs(&self) -> u64 {
        self.pq.epochs()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HySignature {
    pub la: LaAggSignature,
    pub pq: PqSignature,
}

impl HySignature {
    /// Cryptographic payload plus the shared header, excluding the tag.
    pub fn payload_len(&self) -> usize {
        HEADER_LEN + LaAggSignature::PAYLOAD_LEN + self.pq.payload_len()
    }

    /// `0x03 || id || j || s || x || s_1..s_k`.
    ///
    /// # Panics
    ///
    /// If the components disagree on signer or epoch.
    pub fn to_bytes(&self) -> Vec<u8> {
        assert!(
            self.la.id == self.pq.id && self.la.epoch == self.pq.epoch,
            "hybrid components out of lockstep"
        );
        let mut out = Vec::with_capacity(1 + self.payload_len());
        out.push(SIGNATURE_TAG);
        out.extend_from_slice(self.la.id.as_bytes());
        out.extend_from_slice(&self.la.epoch.to_be_bytes());
        self.la.write_payload(&mut out);
        self.pq.write_payload(&mut out);
        out
    }

    pub fn from_bytes(bytes: &[u8], group: &Group) -> Result<Self> {
        let mut r = Reader::new(bytes);
        r.expect_tag(SIGNATURE_TAG, "hybrid signature")?;
        let id = r.id()?;
        let epoch = r.u64()?;
        let la = LaAggSignature::read_payload(&mut r, group, id, epoch)?;
        let rest = r.remaining();
        if rest == 0 || !rest.is_multiple_of(DIGEST_LEN) {
            return Err(Error::decode("hybrid signature: bad hash-based payload"));
        }
        let values = (0..rest / DIGEST_LEN).map(|_| r.digest()).collect::<Result<_>>()?;
        Ok(HySignature { la, pq: PqSignature { id, epoch, values } })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyCommitment {
    pub la: LaCommitment,
    pub pq: PqCommitment,
}

impl HyCommitment {
    /// `0x13 || id || j || L || R || v_1..v_t`.
    pub fn to_bytes(&self, group: &Group) -> Vec<u8> {
        let mut out = Vec::with_capacity(1 + HEADER_LEN + 4 + ELEMENT_LEN + self.pq.values.len() * DIGEST_LEN);
        out.push(COMMITMENT_TAG);
        out.extend_from_slice(self.la.id.as_bytes());
        out.extend_from_slice(&self.la.epoch.to_be_bytes());
        out.extend_from_slice(&self.la.batch_len.to_be_bytes());
        out.extend_from_slice(&group.encode_element(&self.la.element));
        for v in &self.pq.values {
            out.extend_from_slice(&v.0);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], group: &Group) -> Result<Self> {
        let mut r = Reader::new(bytes);
        r.expect_tag(COMMITMENT_TAG, "hybrid commitment")?;
        let id = r.id()?;
        let epoch = r.u64()?;
        let batch_len = r.u32()?;
        let element = group.decode_element(r.take(ELEMENT_LEN)?)?;
        let rest = r.remaining();
        if rest == 0 || !rest.is_multiple_of(DIGEST_LEN) {
            return Err(Error::decode("hybrid commitment: bad hash-based body"));
        }
        let values = (0..rest / DIGEST_LEN).map(|_| r.digest()).collect::<Result<_>>()?;
        Ok(HyCommitment {
            la: LaCommitment { id, epoch, batch_len, element },
            pq: PqCommitment { id, epoch, values },
        })
    }
}

/// Both sub-signers, advanced together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HySignerState {
    la: LaSignerState,
    pq: PqSignerState,
}

impl HySignerState {
    pub fn new(la: LaSignerState, pq: PqSignerState) -> Result<Self> {
        if la.id() != pq.id() {
            return Err(Error::InvalidParams("sub-signers belong to different ids".into()));
        }
        if la.epoch() != pq.epoch() {
            return Err(Error::EpochDesync { la: la.epoch(), pq: pq.epoch() });
        }
        if la.params().epochs != pq.params().epochs() {
            return Err(Error::InvalidParams("sub-signers sized for different J".into()));
        }
        Ok(HySignerState { la, pq })
    }

    pub fn id(&self) -> SignerId {
        self.la.id()
    }

    pub fn epoch(&self) -> u64 {
        self.la.epoch()
    }

    pub fn la(&self) -> &LaSignerState {
        &self.la
    }

    pub fn pq(&self) -> &PqSignerState {
        &self.pq
    }

    pub fn public_key(&self) -> GroupElement {
        self.la.public_key()
    }

    pub fn is_exhausted(&self) -> bool {
        self.la.is_exhausted() || self.pq.is_exhausted()
    }

    pub fn fast_forward(&mut self, target: u64) -> Result<()> {
        let (mut la, mut pq) = (self.la.clone(), self.pq.clone());
        la.fast_forward(target)?;
        pq.fast_forward(target)?;
        self.la = la;
        self.pq = pq;
        Ok(())
    }

    pub fn sign<M: AsRef<[u8]>>(&mut self, batch: &[M]) -> Result<HySignature> {
        if self.la.epoch() != self.pq.epoch() {
            return Err(Error::EpochDesync { la: self.la.epoch(), pq: self.pq.epoch() });
        }
        if self.pq.is_exhausted() {
            return Err(Error::EpochExhausted { max: self.pq.params().epochs() });
        }
        if batch.len() != self.la.params().batch_len {
            return Err(Error::BatchLength { expected: self.la.params().batch_len, got: batch.len() });
        }
        let nested = nest(batch)?;
        let la = self.la.sign(&nested.chain)?;
        let pq = self.pq.sign(&inner_message(&la, nested.last()))?;
        Ok(HySignature { la, pq })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.la.to_bytes();
        out.extend_from_slice(&self.pq.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let la = LaSignerState::read(&mut r)?;
        let pq = PqSignerState::read(&mut r)?;
        r.finish()?;
        HySignerState::new(la, pq)
    }
}

/// Oracle-side material for both layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyMaster {
    pub la: LaMaster,
    pub pq: PqKeyMaterial,
}

impl HyMaster {
    pub fn params(&self) -> HyParams {
        HyParams {
            group: self.la.params().group.clone(),
            batch_len: self.la.params().batch_len,
            pq: *self.pq.params(),
        }
    }

    pub fn contains(&self, id: &SignerId) -> bool {
        self.la.contains(id) && self.pq.contains(id)
    }

    pub fn construct_commitment(&self, id: &SignerId, epoch: u64) -> Result<HyCommitment> {
        Ok(HyCommitment {
            la: self.la.construct_commitment(id, epoch)?,
            pq: self.pq.construct_commitment(id, epoch)?,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.la.to_bytes();
        out.extend_from_slice(&self.pq.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let m = Self::read(&mut r)?;
        r.finish()?;
        Ok(m)
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self> {
        let la = LaMaster::read(r)?;
        let pq = PqKeyMaterial::read(r)?;
        if la.params().epochs != pq.params().epochs() {
            return Err(Error::decode("hybrid layers sized for different J"));
        }
        Ok(HyMaster { la, pq })
    }
}

#[derive(Debug)]
pub struct HyKeys {
    pub master: HyMaster,
    pub signers: Vec<HySignerState>,
}

pub fn keygen<R: RngCore + CryptoRng>(
    rng: &mut R,
    ids: &[SignerId],
    params: &HyParams,
) -> Result<HyKeys> {
    let la_msk = MasterKey::generate(rng);
    let pq_msk = MasterKey::generate(rng);
    keygen_with_masters(la_msk, pq_msk, ids, params)
}

pub fn keygen_with_masters(
    la_msk: MasterKey,
    pq_msk: MasterKey,
    ids: &[SignerId],
    params: &HyParams,
) -> Result<HyKeys> {
    let la_keys = la::keygen_with_master(la_msk, ids, params.la())?;
    let pq_keys = pq::keygen_with_master(pq_msk, ids, params.pq)?;
    let signers = la_keys
        .signers
        .into_iter()
        .zip(pq_keys.signers)
        .map(|(a, b)| HySignerState::new(a, b))
        .collect::<Result<_>>()?;
    Ok(HyKeys {
        master: HyMaster { la: la_keys.master, pq: pq_keys.material },
        signers,
    })
}

/// Accepts iff the aggregate layer verifies over the nested digests and the
/// hash-based layer verifies over `s || n_L`.
pub fn verify<M: AsRef<[u8]>>(
    params: &HyParams,
    public_key: &GroupElement,
    commitment: &HyCommitment,
    batch: &[M],
    sigma: &HySignature,
) -> std::result::Result<(), VerifyError> {
    if sigma.la.id != sigma.pq.id || sigma.la.epoch != sigma.pq.epoch {
        return Err(VerifyError::Shape("signature components disagree on signer or epoch"));
    }
    if commitment.la.id != commitment.pq.id || commitment.la.epoch != commitment.pq.epoch {
        return Err(VerifyError::Shape("commitment components disagree on signer or epoch"));
    }
    let nested = nest(batch).map_err(|_| VerifyError::Shape("empty batch"))?;
    la::verify(&params.group, public_key, &commitment.la, &nested.chain, &sigma.la)?;
    pq::verify(
        &params.pq,
        &commitment.pq,
        &inner_message(&sigma.la, nested.last()),
        &sigma.pq,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::count_calls;

    fn params() -> HyParams {
        HyParams::new(Group::production(), 3, PqParams::standard(2, 4).unwrap()).unwrap()
    }

    fn keys() -> HyKeys {
        let ids = [SignerId([1; 16]), SignerId([2; 16])];
        keygen_with_masters(MasterKey::from_bytes([1; 32]), MasterKey::from_bytes([2; 32]), &ids, &params()).unwrap()
    }

    #[test]
    fn nest_base_case() {
        let n = nest(&[b"only"]).unwrap();
        assert_eq!(n.chain, vec![hash(Domain::H0, b"only")]);
        assert_eq!(n.last(), &hash(Domain::H0, b"only"));
        assert_eq!(nest::<&[u8]>(&[]), Err(Error::EmptyBatch));
    }

    #[test]
    fn nest_matches_reference_recurrence() {
        // Independent oracle: hashlib re-implementation of the recurrence.
        let n = nest(&[b"alpha".as_slice(), b"beta", b"gamma"]).unwrap();
        let hex = "78d33f2d5fe71372b94553a6d6e0eb0f8eb6dce31a49d52f3baa131b0b0a3abe";
        let expected: Vec<u8> = (0..32).map(|i| u8::from_str_radix(&hex[2 * i..2 * i + 2], 16).unwrap()).collect();
        assert_eq!(n.last().0.as_slice(), expected.as_slice());
    }

    #[test]
    fn first_message_reaches_the_end() {
        let a = nest(&[b"a".as_slice(), b"b", b"c"]).unwrap();
        let b = nest(&[b"A".as_slice(), b"b", b"c"]).unwrap();
        for (x, y) in a.chain.iter().zip(&b.chain) {
            assert_ne!(x, y);
        }
    }

    #[test]
    fn honest_hybrid_verifies_in_lockstep() {
        let k = keys();
        let p = params();
        let mut s = k.signers[0].clone();
        for j in 1..=p.epochs() {
            let batch = [format!("{j}-a"), format!("{j}-b"), format!("{j}-c")];
            let sig = s.sign(&batch).unwrap();
            assert_eq!(sig.la.epoch, j);
            assert_eq!(sig.pq.epoch, j);
            let c = k.master.construct_commitment(&s.id(), j).unwrap();
            assert_eq!(verify(&p, &s.public_key(), &c, &batch, &sig), Ok(()));
        }
        assert!(s.sign(&["a", "b", "c"]).is_err());
    }

    #[test]
    fn inner_message_is_64_bytes() {
        let k = keys();
        let mut s = k.signers[0].clone();
        let sig = s.sign(&["a", "b", "c"]).unwrap();
        let n = nest(&["a", "b", "c"]).unwrap();
        assert_eq!(inner_message(&sig.la, n.last()).len(), 64);
    }

    #[test]
    fn signing_cost_is_aggregate_plus_eighteen() {
        let k = keys();
        let batch = ["a", "b", "c"];
        let nested = nest(&batch).unwrap();
        let (_, la_cost) = count_calls(|| k.signers[0].la().clone().sign(&nested.chain).unwrap());
        let (_, nest_cost) = count_calls(|| nest(&batch).unwrap());
        let (_, hy_cost) = count_calls(|| k.signers[0].clone().sign(&batch).unwrap());
        assert_eq!(hy_cost.total(), nest_cost.total() + la_cost.total() + 18);
    }

    #[test]
    fn desync_is_rejected_before_signing() {
        let k = keys();
        let s = &k.signers[0];
        let mut pq = s.pq().clone();
        pq.update().unwrap();
        assert_eq!(
            HySignerState::new(s.la().clone(), pq),
            Err(Error::EpochDesync { la: 1, pq: 2 })
        );
    }

    #[test]
    fn encodings_round_trip() {
        let k = keys();
        let g = Group::production();
        let mut s = k.signers[1].clone();
        let sig = s.sign(&["a", "b", "c"]).unwrap();
        let enc = sig.to_bytes();
        assert_eq!(enc.len(), 1 + 24 + 64 + 512);
        assert_eq!(sig.payload_len(), 600);
        assert_eq!(HySignature::from_bytes(&enc, &g).unwrap(), sig);
        assert_eq!(HySignerState::from_bytes(&s.to_bytes()).unwrap(), s);
        assert_eq!(HyMaster::from_bytes(&k.master.to_bytes()).unwrap(), k.master);
        let c = k.master.construct_commitment(&s.id(), 1).unwrap();
        assert_eq!(HyCommitment::from_bytes(&c.to_bytes(&g), &g).unwrap(), c);
    }
}
