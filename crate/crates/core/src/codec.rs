use crate::error::{Error, Result};
use crate::hash::{Digest, DIGEST_LEN};
use crate::id::{SignerId, ID_LEN};

/// Cursor over a byte slice for the fixed-layout wire formats.
pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(Error::decode(format!(
                "truncated input: need {n} bytes at offset {}",
                self.pos
            )));
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn peek(&self) -> &'a [u8] {
        &self.buf[self.pos..]
    }

    pub fn rest(&mut self) -> &'a [u8] {
        let out = &self.buf[self.pos..];
        self.pos = self.buf.len();
        out
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn id(&mut self) -> Result<SignerId> {
        Ok(SignerId(self.take(ID_LEN)?.try_into().unwrap()))
    }

    pub fn digest(&mut self) -> Result<Digest> {
        Ok(Digest(self.take(DIGEST_LEN)?.try_into().unwrap()))
    }

    pub fn expect_tag(&mut self, tag: u8, what: &str) -> Result<()> {
        let got = self.u8()?;
        if got != tag {
            return Err(Error::decode(format!(
                "{what}: expected tag {tag:#04x}, found {got:#04x}"
            )));
        }
        Ok(())
    }

    pub fn finish(self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::decode(format!(
                "{} trailing bytes",
                self.buf.len() - self.pos
            )));
        }
        Ok(())
    }
}

pub(crate) fn digests(r: &mut Reader<'_>, n: usize) -> Result<Vec<Digest>> {
    (0..n).map(|_| r.digest()).collect()
}
