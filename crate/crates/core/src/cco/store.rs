use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::codec::Reader;
use crate::container::encode_list;
use crate::error::{Error, Result};
use crate::hy::HyMaster;
use crate::id::SignerId;
use crate::la::LaMaster;
use crate::pq::PqKeyMaterial;
use crate::Scheme;

use super::protocol::{Request, Response, Status, MAX_EXPORT};

/// Key-generation output destined for the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provisioning {
    Pq(PqKeyMaterial),
    La(LaMaster),
    Hy(HyMaster),
}

impl Provisioning {
    pub fn scheme(&self) -> Scheme {
        match self {
            Provisioning::Pq(_) => Scheme::Pq,
            Provisioning::La(_) => Scheme::La,
            Provisioning::Hy(_) => Scheme::Hy,
        }
    }

    pub fn ids(&self) -> Vec<SignerId> {
        match self {
            Provisioning::Pq(m) => m.ids().copied().collect(),
            Provisioning::La(m) => m.ids().copied().collect(),
            Provisioning::Hy(m) => m.la.ids().copied().collect(),
        }
    }

    /// Scheme tag followed by the module encoding.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.scheme() as u8];
        out.extend_from_slice(&match self {
            Provisioning::Pq(m) => m.to_bytes(),
            Provisioning::La(m) => m.to_bytes(),
            Provisioning::Hy(m) => m.to_bytes(),
        });
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let out = match Scheme::from_tag(r.u8()?) {
            Some(Scheme::Pq) => Provisioning::Pq(PqKeyMaterial::read(&mut r)?),
            Some(Scheme::La) => Provisioning::La(LaMaster::read(&mut r)?),
            Some(Scheme::Hy) => Provisioning::Hy(HyMaster::read(&mut r)?),
            None => return Err(Error::decode("unknown scheme tag")),
        };
        r.finish()?;
        Ok(out)
    }
}

/// Secrets and signer registry. Each scheme keeps its own id namespace.
#[derive(Debug, Default)]
pub struct CcoStore {
    pq: Vec<PqKeyMaterial>,
    la: Vec<LaMaster>,
    hy: Vec<HyMaster>,
    pq_ids: HashMap<SignerId, usize>,
    la_ids: HashMap<SignerId, usize>,
    hy_ids: HashMap<SignerId, usize>,
}

/// Reader-writer shared store used by the service.
pub type SharedStore = Arc<RwLock<CcoStore>>;

impl CcoStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_shared(self) -> SharedStore {
        Arc::new(RwLock::new(self))
    }

    /// Loads a key-generation output. All ids are checked before anything
    /// is inserted.
    pub fn provision(&mut self, p: Provisioning) -> Result<()> {
        let ids = p.ids();
        let registry = match p.scheme() {
            Scheme::Pq => &self.pq_ids,
            Scheme::La => &self.la_ids,
            Scheme::Hy => &self.hy_ids,
        };
        if let Some(dup) = ids.iter().find(|id| registry.contains_key(id)) {
            return Err(Error::DuplicateId(*dup));
        }
        let (slot, registry) = match p {
            Provisioning::Pq(m) => {
                self.pq.push(m);
                (self.pq.len() - 1, &mut self.pq_ids)
            }
            Provisioning::La(m) => {
                self.la.push(m);
                (self.la.len() - 1, &mut self.la_ids)
            }
            Provisioning::Hy(m) => {
                self.hy.push(m);
                (self.hy.len() - 1, &mut self.hy_ids)
            }
        };
        for id in ids {
            registry.insert(id, slot);
        }
        Ok(())
    }

    pub fn signer_count(&self, scheme: Scheme) -> usize {
        match scheme {
            Scheme::Pq => self.pq_ids.len(),
            Scheme::La => self.la_ids.len(),
            Scheme::Hy => self.hy_ids.len(),
        }
    }

    fn pq_materials_mut(&mut self) -> impl Iterator<Item = &mut PqKeyMaterial> {
        self.pq.iter_mut().chain(self.hy.iter_mut().map(|h| &mut h.pq))
    }

    /// Re-splits every hash-chain key schedule into `j1` anchors.
    ///
    /// Fails without changing anything if `j1` does not divide some `J`.
    pub fn set_storage_policy(&mut self, j1: u64) -> Result<()> {
        for m in self.pq_materials_mut() {
            m.params().with_anchors(j1)?;
        }
        for m in self.pq_materials_mut() {
            m.set_storage_policy(j1)?;
        }
        Ok(())
    }

    /// Total bytes held in anchor tables.
    pub fn anchor_bytes(&self) -> usize {
        self.pq
            .iter()
            .chain(self.hy.iter().map(|h| &h.pq))
            .map(|m| m.anchor_bytes_per_signer() * m.ids().count())
            .sum()
    }

    /// Serialized commitment for one epoch.
    pub fn commitment(&self, scheme: Scheme, id: &SignerId, epoch: u64) -> Result<Vec<u8>> {
        match scheme {
            Scheme::Pq => {
                let m = &self.pq[*self.pq_ids.get(id).ok_or(Error::UnknownId(*id))?];
                Ok(m.construct_commitment(id, epoch)?.to_bytes())
            }
            Scheme::La => {
                let m = &self.la[*self.la_ids.get(id).ok_or(Error::UnknownId(*id))?];
                Ok(m.construct_commitment(id, epoch)?.to_bytes(&m.params().group))
            }
            Scheme::Hy => {
                let m = &self.hy[*self.hy_ids.get(id).ok_or(Error::UnknownId(*id))?];
                Ok(m.construct_commitment(id, epoch)?.to_bytes(&m.la.params().group))
            }
        }
    }

    fn la_batch_len(&self, id: &SignerId) -> Result<usize> {
        let slot = self.la_ids.get(id).ok_or(Error::UnknownId(*id))?;
        Ok(self.la[*slot].params().batch_len)
    }

    /// Commitments for epochs `from..=to`, in the counted-list container.
    pub fn batch_export(&self, scheme: Scheme, id: &SignerId, from: u64, to: u64) -> Result<Vec<u8>> {
        if from == 0 || from > to {
            return Err(Error::EpochOutOfRange { epoch: from, max: to });
        }
        if to - from >= MAX_EXPORT {
            return Err(Error::InvalidParams(format!("export limited to {MAX_EXPORT} epochs")));
        }
        let items = (from..=to)
            .map(|j| self.commitment(scheme, id, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(encode_list(items))
    }

    /// Answers one decoded request.
    pub fn handle(&self, req: &Request) -> Response {
        let kind = req.message_type();
        let result = match *req {
            Request::Pq { id, epoch } => self.commitment(Scheme::Pq, &id, epoch),
            Request::La { id, epoch, batch_len } => self.la_batch_len(&id).and_then(|l| {
                if l != batch_len as usize {
                    Err(Error::BatchLength { expected: l, got: batch_len as usize })
                } else {
                    self.commitment(Scheme::La, &id, epoch)
                }
            }),
            Request::Hy { id, epoch } => self.commitment(Scheme::Hy, &id, epoch),
            Request::Export { scheme, id, from, to } => self.batch_export(scheme, &id, from, to),
        };
        match result {
            Ok(body) => Response::ok(kind, body),
            Err(e) => Response::error(kind, Status::from_error(&e)),
        }
    }

    /// Decodes a request payload (type byte + body) and answers it.
    pub fn handle_bytes(&self, payload: &[u8]) -> Response {
        match Request::decode(payload) {
            Ok(req) => self.handle(&req),
            Err(_) => Response::error(payload.first().copied().unwrap_or(0), Status::Malformed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use crate::hash::count_calls;
    use crate::la::{self, LaParams};
    use crate::pq::{self, PqParams};
    use crate::secret::MasterKey;

    fn id(n: u8) -> SignerId {
        SignerId([n; 16])
    }

    fn pq_store(j1: u64, j2: u64) -> CcoStore {
        let keys = pq::keygen_with_master(
            MasterKey::from_bytes([3; 32]),
            &[id(1), id(2)],
            PqParams::new(4, 8, j1, j2).unwrap(),
        )
        .unwrap();
        let mut s = CcoStore::new();
        s.provision(Provisioning::Pq(keys.material)).unwrap();
        s
    }

    #[test]
    fn provision_lookup_and_collisions() {
        let mut s = pq_store(4, 4);
        assert!(s.commitment(Scheme::Pq, &id(1), 1).is_ok());
        assert!(s.commitment(Scheme::Pq, &id(2), 16).is_ok());
        assert_eq!(s.commitment(Scheme::Pq, &id(3), 1), Err(Error::UnknownId(id(3))));
        let again = pq::keygen_with_master(MasterKey::from_bytes([4; 32]), &[id(5), id(2)], PqParams::toy()).unwrap();
        assert_eq!(s.provision(Provisioning::Pq(again.material)), Err(Error::DuplicateId(id(2))));
        // nothing from the rejected bundle leaked in
        assert!(s.commitment(Scheme::Pq, &id(5), 1).is_err());
        // other scheme namespaces are independent
        let la_keys = la::keygen_with_master(MasterKey::from_bytes([5; 32]), &[id(2)], LaParams::new(Group::small_test(), 4, 2).unwrap()).unwrap();
        s.provision(Provisioning::La(la_keys.master)).unwrap();
        assert_eq!(s.signer_count(Scheme::La), 1);
    }

    #[test]
    fn status_codes() {
        let s = pq_store(4, 4);
        let r = s.handle(&Request::Pq { id: id(1), epoch: 17 });
        assert_eq!(r.status, Status::EpochRange);
        let r = s.handle(&Request::Pq { id: id(9), epoch: 1 });
        assert_eq!(r.status, Status::UnknownId);
        let r = s.handle_bytes(&[0x01, 0x00]);
        assert_eq!(r.status, Status::Malformed);
        let r = s.handle(&Request::Pq { id: id(1), epoch: 1 });
        assert_eq!(r.status, Status::Ok);
        assert_eq!(r.body.len(), 1 + 16 + 8 + 8 * 32);
    }

    #[test]
    fn policy_worst_case_chain_work() {
        // J = 16: chain hashes = H1 calls beyond the t commitment secrets
        for (j1, expected_anchors, worst) in [(1, 0, 15), (4, 3, 3), (16, 15, 0)] {
            let mut s = pq_store(4, 4);
            s.set_storage_policy(j1).unwrap();
            assert_eq!(s.anchor_bytes(), 2 * expected_anchors * 32);
            let max_chain = (1..=16)
                .map(|j| {
                    let (_, c) = count_calls(|| s.commitment(Scheme::Pq, &id(1), j).unwrap());
                    c.calls_h1 - 8
                })
                .max()
                .unwrap();
            assert_eq!(max_chain, worst);
        }
        let mut s = pq_store(4, 4);
        assert!(s.set_storage_policy(5).is_err());
        assert_eq!(s.anchor_bytes(), 2 * 3 * 32);
    }

    #[test]
    fn export_ranges() {
        let s = pq_store(4, 4);
        let all = s.batch_export(Scheme::Pq, &id(1), 1, 4).unwrap();
        let items = crate::container::decode_list(&all).unwrap();
        assert_eq!(items.len(), 4);
        let single = s.batch_export(Scheme::Pq, &id(1), 3, 3).unwrap();
        assert_eq!(crate::container::decode_list(&single).unwrap()[0], s.commitment(Scheme::Pq, &id(1), 3).unwrap());
        assert!(s.batch_export(Scheme::Pq, &id(1), 4, 3).is_err());
        assert!(s.batch_export(Scheme::Pq, &id(1), 0, 3).is_err());
        assert!(matches!(s.batch_export(Scheme::Pq, &id(1), 10, 17), Err(Error::EpochOutOfRange { .. })));
    }

    #[test]
    fn provisioning_round_trip() {
        let keys = pq::keygen_with_master(MasterKey::from_bytes([3; 32]), &[id(1)], PqParams::toy()).unwrap();
        let p = Provisioning::Pq(keys.material);
        assert_eq!(Provisioning::from_bytes(&p.to_bytes()).unwrap(), p);
        // J1 = 1: tag + params + 32-byte master key + registry of one id
        let j1 = pq::keygen_with_master(MasterKey::from_bytes([3; 32]), &[id(1)], PqParams::new(4, 8, 1, 16).unwrap()).unwrap();
        assert_eq!(Provisioning::Pq(j1.material).to_bytes().len(), 1 + 24 + 32 + 4 + 16);
    }
}
