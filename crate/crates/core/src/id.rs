use std::fmt;

use crate::error::{Error, Result};

pub const ID_LEN: usize = 16;

/// Fixed-width signer identity (e.g. a device MAC address, zero padded).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignerId(pub [u8; ID_LEN]);

impl SignerId {
    pub fn new(bytes: [u8; ID_LEN]) -> Self {
        SignerId(bytes)
    }

    /// Accepts up to 16 bytes and right-pads with zeros.
    pub fn from_slice_padded(bytes: &[u8]) -> Result<Self> {
        if bytes.len() > ID_LEN {
            return Err(Error::InvalidParams(format!(
                "signer id longer than {ID_LEN} bytes"
            )));
        }
        let mut id = [0u8; ID_LEN];
        id[..bytes.len()].copy_from_slice(bytes);
        Ok(SignerId(id))
    }

    pub fn as_bytes(&self) -> &[u8; ID_LEN] {
        &self.0
    }
}

impl fmt::Display for SignerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignerId({self})")
    }
}

pub(crate) fn ensure_distinct(ids: &[SignerId]) -> Result<()> {
    if ids.is_empty() {
        return Err(Error::InvalidParams("no signer ids".into()));
    }
    let mut seen = std::collections::HashSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(*id) {
            return Err(Error::DuplicateId(*id));
        }
    }
    Ok(())
}
