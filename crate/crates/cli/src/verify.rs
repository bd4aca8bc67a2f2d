use std::collections::HashMap;
use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hases_core::cco::{CcoClient, ClientError, Status};
use hases_core::container::decode_list;
use hases_core::hy::{self, HyCommitment, HySignature};
use hases_core::la::{self, LaAggSignature, LaCommitment};
use hases_core::pq::{self, PqCommitment, PqSignature};
use hases_core::{Scheme, SignerId};

use crate::files::{Params, PublicInfo};
use crate::stream::{batches, read_messages};
use crate::{Input, Verdict};

pub enum Source {
    Online(SocketAddr),
    Offline(PathBuf),
}

enum Commitment {
    Pq(PqCommitment),
    La(LaCommitment),
    Hy(HyCommitment),
}

impl Commitment {
    fn decode(bytes: &[u8], params: &Params) -> hases_core::Result<(SignerId, u64, Commitment)> {
        Ok(match params {
            Params::Pq(_) => {
                let c = PqCommitment::from_bytes(bytes)?;
                (c.id, c.epoch, Commitment::Pq(c))
            }
            Params::La(p) => {
                let c = LaCommitment::from_bytes(bytes, &p.group)?;
                (c.id, c.epoch, Commitment::La(c))
            }
            Params::Hy(p) => {
                let c = HyCommitment::from_bytes(bytes, &p.group)?;
                (c.la.id, c.la.epoch, Commitment::Hy(c))
            }
        })
    }
}

/// Where commitments come from. `Ok(None)` means the source has no
/// commitment for that signer and epoch, which rejects the signature.
enum Commitments {
    Online(CcoClient),
    Offline(HashMap<(SignerId, u64), Vec<u8>>),
}

impl Commitments {
    fn open(source: Source, params: &Params) -> Result<Self> {
        Ok(match source {
            Source::Online(addr) => {
                Commitments::Online(CcoClient::connect(addr).with_context(|| format!("connecting to {addr}"))?)
            }
            Source::Offline(path) => {
                let raw = fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
                let mut map = HashMap::new();
                for item in decode_list(&raw).with_context(|| format!("parsing {}", path.display()))? {
                    let (id, epoch, _) = Commitment::decode(item, params)
                        .with_context(|| format!("commitment in {}", path.display()))?;
                    map.insert((id, epoch), item.to_vec());
                }
                Commitments::Offline(map)
            }
        })
    }

    fn fetch(&mut self, params: &Params, id: SignerId, epoch: u64) -> Result<Option<Commitment>> {
        let bytes = match self {
            Commitments::Offline(map) => match map.get(&(id, epoch)) {
                Some(b) => b.clone(),
                None => return Ok(None),
            },
            Commitments::Online(client) => {
                let result = match params {
                    Params::Pq(_) => client.pq_commitment(id, epoch).map(Commitment::Pq),
                    Params::La(p) => {
                        client.la_commitment(&p.group, id, epoch, p.batch_len as u32).map(Commitment::La)
                    }
                    Params::Hy(p) => client.hy_commitment(&p.group, id, epoch).map(Commitment::Hy),
                };
                return match result {
                    Ok(c) => Ok(Some(c)),
                    Err(ClientError::Status(Status::UnknownId | Status::EpochRange)) => Ok(None),
                    Err(e) => Err(e).context("commitment oracle"),
                };
            }
        };
        Ok(Some(Commitment::decode(&bytes, params)?.2))
    }
}

enum Signature {
    Pq(PqSignature),
    La(LaAggSignature),
    Hy(HySignature),
}

impl Signature {
    fn decode(bytes: &[u8], params: &Params) -> Option<Signature> {
        match params {
            Params::Pq(_) => PqSignature::from_bytes(bytes).ok().map(Signature::Pq),
            Params::La(p) => LaAggSignature::from_bytes(bytes, &p.group).ok().map(Signature::La),
            Params::Hy(p) => HySignature::from_bytes(bytes, &p.group).ok().map(Signature::Hy),
        }
    }

    fn signer(&self) -> (SignerId, u64) {
        match self {
            Signature::Pq(s) => (s.id, s.epoch),
            Signature::La(s) => (s.id, s.epoch),
            Signature::Hy(s) => (s.la.id, s.la.epoch),
        }
    }
}

/// Checks one batch; `Err` only for operational failures.
fn check(
    info: &PublicInfo,
    commitments: &mut Commitments,
    batch: &[Vec<u8>],
    sig_bytes: &[u8],
) -> Result<std::result::Result<(), String>> {
    let params = &info.params;
    let Some(sig) = Signature::decode(sig_bytes, params) else {
        return Ok(Err("signature does not decode".into()));
    };
    let (id, epoch) = sig.signer();
    let Some(public_key) = info.keys.get(&id) else {
        return Ok(Err(format!("unknown signer {id}")));
    };
    let Some(commitment) = commitments.fetch(params, id, epoch)? else {
        return Ok(Err(format!("no commitment for {id} at epoch {epoch}")));
    };
    let result = match (params, &commitment, &sig) {
        (Params::Pq(p), Commitment::Pq(c), Signature::Pq(s)) => pq::verify(p, c, &batch[0], s),
        (Params::La(p), Commitment::La(c), Signature::La(s)) => {
            la::verify(&p.group, public_key.as_ref().unwrap(), c, batch, s)
        }
        (Params::Hy(p), Commitment::Hy(c), Signature::Hy(s)) => {
            hy::verify(p, public_key.as_ref().unwrap(), c, batch, s)
        }
        _ => unreachable!("decoded under one parameter set"),
    };
    Ok(result.map_err(|e| e.to_string()))
}

pub fn run(public: &Path, input: &Input, sigs: &Path, source: Source) -> Result<Verdict> {
    let info = PublicInfo::load(public)?;
    let messages = read_messages(&input.input, input.format, !input.no_header)?;
    let batches = batches(messages, info.params.batch_len())?;
    let raw = fs::read(sigs).with_context(|| format!("reading {}", sigs.display()))?;
    let sig_list = decode_list(&raw).with_context(|| format!("parsing {}", sigs.display()))?;
    if sig_list.len() != batches.len() {
        bail!("{} signatures for {} batches", sig_list.len(), batches.len());
    }
    let mut commitments = Commitments::open(source, &info.params)?;

    let mut rejected = 0usize;
    for (i, (batch, sig)) in batches.iter().zip(&sig_list).enumerate() {
        match check(&info, &mut commitments, batch, sig)? {
            Ok(()) => println!("batch {}: valid", i + 1),
            Err(why) => {
                rejected += 1;
                println!("batch {}: REJECTED ({why})", i + 1);
            }
        }
    }
    let scheme: Scheme = info.params.scheme();
    println!("{}: {} of {} batches valid", scheme.name(), batches.len() - rejected, batches.len());
    Ok(if rejected == 0 { Verdict::Valid } else { Verdict::Rejected })
}
