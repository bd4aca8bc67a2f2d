//! On-disk artifacts: id lists, key files, the public registry and the
//! oracle secret.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context, Result};
use hases_core::hy::{HyParams, HySignerState};
use hases_core::la::{LaParams, LaSignerState};
use hases_core::pq::{PqParams, PqSignerState};
use hases_core::{Group, GroupElement, MasterKey, Scheme, SignerId};

pub const PUBLIC_FILE: &str = "public.bin";
pub const SECRET_FILE: &str = "cco.secret";
pub const SIGNER_DIR: &str = "signers";

/// One id per line: 32 hex digits, or up to 16 bytes of text (zero-padded).
pub fn parse_id(line: &str) -> Result<SignerId> {
    if line.len() == 32 {
        if let Ok(bytes) = hex::decode(line) {
            return Ok(SignerId::new(bytes.try_into().unwrap()));
        }
    }
    SignerId::from_slice_padded(line.as_bytes()).map_err(|e| anyhow!("id {line:?}: {e}"))
}

pub fn read_ids(path: &Path) -> Result<Vec<SignerId>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let ids = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(parse_id)
        .collect::<Result<Vec<_>>>()?;
    ensure!(!ids.is_empty(), "{} lists no ids", path.display());
    Ok(ids)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Params {
    Pq(PqParams),
    La(LaParams),
    Hy(HyParams),
}

impl Params {
    pub fn scheme(&self) -> Scheme {
        match self {
            Params::Pq(_) => Scheme::Pq,
            Params::La(_) => Scheme::La,
            Params::Hy(_) => Scheme::Hy,
        }
    }

    pub fn group(&self) -> Option<&Group> {
        match self {
            Params::Pq(_) => None,
            Params::La(p) => Some(&p.group),
            Params::Hy(p) => Some(&p.group),
        }
    }

    pub fn batch_len(&self) -> usize {
        match self {
            Params::Pq(_) => 1,
            Params::La(p) => p.batch_len,
            Params::Hy(p) => p.batch_len,
        }
    }
}

/// What verifiers and the oracle need to know about a key ceremony, minus
/// any secret: parameters, ids and (for group schemes) public keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicInfo {
    pub params: Params,
    pub keys: BTreeMap<SignerId, Option<GroupElement>>,
}

fn put_section(out: &mut Vec<u8>, bytes: &[u8]) {
    out.extend_from_slice(&(bytes.len() as u32).to_be_bytes());
    out.extend_from_slice(bytes);
}

fn take<'a>(buf: &mut &'a [u8], n: usize) -> Result<&'a [u8]> {
    ensure!(buf.len() >= n, "public file is truncated");
    let (head, tail) = buf.split_at(n);
    *buf = tail;
    Ok(head)
}

fn take_section<'a>(buf: &mut &'a [u8]) -> Result<&'a [u8]> {
    let len = u32::from_be_bytes(take(buf, 4)?.try_into().unwrap()) as usize;
    take(buf, len)
}

impl PublicInfo {
    /// `scheme · sections · count(4) · (id · element?)*`, where sections are
    /// length-prefixed parameter encodings (two for the hybrid scheme).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.params.scheme() as u8];
        match &self.params {
            Params::Pq(p) => put_section(&mut out, &p.to_bytes()),
            Params::La(p) => put_section(&mut out, &p.to_bytes()),
            Params::Hy(p) => {
                put_section(&mut out, &p.la().to_bytes());
                put_section(&mut out, &p.pq.to_bytes());
            }
        }
        out.extend_from_slice(&(self.keys.len() as u32).to_be_bytes());
        for (id, key) in &self.keys {
            out.extend_from_slice(id.as_bytes());
            if let (Some(group), Some(key)) = (self.params.group(), key) {
                out.extend_from_slice(&group.encode_element(key));
            }
        }
        out
    }

    pub fn from_bytes(mut buf: &[u8]) -> Result<Self> {
        let scheme = Scheme::from_tag(take(&mut buf, 1)?[0]).ok_or_else(|| anyhow!("unknown scheme tag"))?;
        let params = match scheme {
            Scheme::Pq => Params::Pq(PqParams::from_bytes(take_section(&mut buf)?)?),
            Scheme::La => Params::La(LaParams::from_bytes(take_section(&mut buf)?)?),
            Scheme::Hy => {
                let la = LaParams::from_bytes(take_section(&mut buf)?)?;
                let pq = PqParams::from_bytes(take_section(&mut buf)?)?;
                ensure!(la.epochs == pq.epochs(), "hybrid layers sized for different J");
                Params::Hy(HyParams::new(la.group, la.batch_len, pq)?)
            }
        };
        let count = u32::from_be_bytes(take(&mut buf, 4)?.try_into().unwrap());
        let mut keys = BTreeMap::new();
        for _ in 0..count {
            let id = SignerId::from_slice_padded(take(&mut buf, 16)?)?;
            let key = match params.group() {
                Some(g) => Some(g.decode_element(take(&mut buf, 32)?)?),
                None => None,
            };
            ensure!(keys.insert(id, key).is_none(), "duplicate id {id} in public file");
        }
        ensure!(buf.is_empty(), "trailing bytes in public file");
        Ok(PublicInfo { params, keys })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let raw = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_bytes(&raw).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn ids(&self) -> Vec<SignerId> {
        self.keys.keys().copied().collect()
    }
}

/// Master key(s) for the oracle: one for single-layer schemes, two for the
/// hybrid (aggregate layer first).
pub fn encode_secret(keys: &[&MasterKey]) -> Vec<u8> {
    keys.iter().flat_map(|k| k.expose().iter().copied()).collect()
}

pub fn decode_secret(raw: &[u8], scheme: Scheme) -> Result<Vec<MasterKey>> {
    let want = if scheme == Scheme::Hy { 2 } else { 1 };
    ensure!(raw.len() == 32 * want, "oracle secret must be {} bytes, found {}", 32 * want, raw.len());
    Ok(raw
        .chunks_exact(32)
        .map(|c| MasterKey::from_bytes(c.try_into().unwrap()))
        .collect())
}

/// A signer's evolving state, stored as scheme tag plus module encoding.
#[derive(Debug, Clone)]
pub enum SignerKey {
    Pq(PqSignerState),
    La(LaSignerState),
    Hy(HySignerState),
}

impl SignerKey {
    pub fn scheme(&self) -> Scheme {
        match self {
            SignerKey::Pq(_) => Scheme::Pq,
            SignerKey::La(_) => Scheme::La,
            SignerKey::Hy(_) => Scheme::Hy,
        }
    }

    pub fn id(&self) -> SignerId {
        match self {
            SignerKey::Pq(s) => s.id(),
            SignerKey::La(s) => s.id(),
            SignerKey::Hy(s) => s.id(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.scheme() as u8];
        out.extend_from_slice(&match self {
            SignerKey::Pq(s) => s.to_bytes(),
            SignerKey::La(s) => s.to_bytes(),
            SignerKey::Hy(s) => s.to_bytes(),
        });
        out
    }

    pub fn from_bytes(raw: &[u8]) -> Result<Self> {
        let (&tag, body) = raw.split_first().ok_or_else(|| anyhow!("empty key file"))?;
        Ok(match Scheme::from_tag(tag) {
            Some(Scheme::Pq) => SignerKey::Pq(PqSignerState::from_bytes(body)?),
            Some(Scheme::La) => SignerKey::La(LaSignerState::from_bytes(body)?),
            Some(Scheme::Hy) => SignerKey::Hy(HySignerState::from_bytes(body)?),
            None => bail!("unknown scheme tag {tag:#04x}"),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let raw = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_bytes(&raw).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Replaces `path` via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", Path::new(&tmp).display()))?;
    fs::rename(&tmp, path).with_context(|| format!("replacing {}", path.display()))?;
    Ok(())
}
