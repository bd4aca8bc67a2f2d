//! Counted list of length-prefixed records.
//!
//! Layout: 8-byte big-endian entry count, then per entry a 4-byte
//! big-endian length followed by that many bytes. Used for offline
//! commitment exports and signature stream files.

use crate::codec::Reader;
use crate::error::{Error, Result};

pub fn encode_list<I, B>(items: I) -> Vec<u8>
where
    I: IntoIterator<Item = B>,
    B: AsRef<[u8]>,
{
    let mut body = Vec::new();
    let mut count = 0u64;
    for item in items {
        let item = item.as_ref();
        body.extend_from_slice(&(item.len() as u32).to_be_bytes());
        body.extend_from_slice(item);
        count += 1;
    }
    let mut out = Vec::with_capacity(8 + body.len());
    out.extend_from_slice(&count.to_be_bytes());
    out.extend_from_slice(&body);
    out
}

pub fn decode_list(bytes: &[u8]) -> Result<Vec<&[u8]>> {
    let mut r = Reader::new(bytes);
    let count = r.u64()?;
    // every entry costs at least its 4-byte length
    if count > (r.remaining() / 4) as u64 {
        return Err(Error::decode("entry count exceeds input size"));
    }
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let len = r.u32()? as usize;
        out.push(r.take(len)?);
    }
    r.finish()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    proptest::proptest! {
        #[test]
        fn round_trip(items in proptest::collection::vec(proptest::collection::vec(0u8.., 0..64), 0..16)) {
            let enc = encode_list(&items);
            let dec = decode_list(&enc).unwrap();
            proptest::prop_assert_eq!(dec.len(), items.len());
            for (a, b) in dec.iter().zip(&items) {
                proptest::prop_assert_eq!(*a, b.as_slice());
            }
        }
    }

    #[test]
    fn rejects_truncation_and_trailing() {
        let enc = encode_list([b"abc".as_slice(), b"de"]);
        assert!(decode_list(&enc[..enc.len() - 1]).is_err());
        let mut extra = enc.clone();
        extra.push(0);
        assert!(decode_list(&extra).is_err());
        assert!(decode_list(&[0xff; 8]).is_err());
    }
}
