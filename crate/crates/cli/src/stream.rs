//! Message streams: CSV `timestamp,payload` records or length-framed binary.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// `timestamp,payload` per record; the payload bytes are signed verbatim.
    Csv,
    /// Repeated 4-byte big-endian length followed by that many payload bytes.
    Bin,
}

pub fn read_messages(path: &Path, format: Format, header: bool) -> Result<Vec<Vec<u8>>> {
    let raw = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    match format {
        Format::Csv => parse_csv(&raw, header),
        Format::Bin => parse_bin(&raw),
    }
    .with_context(|| format!("parsing {}", path.display()))
}

fn parse_csv(raw: &[u8], header: bool) -> Result<Vec<Vec<u8>>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(header).from_reader(raw);
    let mut out = Vec::new();
    for (i, record) in reader.byte_records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            bail!("record {} has {} fields, expected timestamp,payload", i + 1, record.len());
        }
        out.push(record[1].to_vec());
    }
    Ok(out)
}

fn parse_bin(mut raw: &[u8]) -> Result<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    while !raw.is_empty() {
        if raw.len() < 4 {
            bail!("truncated length prefix after {} messages", out.len());
        }
        let len = u32::from_be_bytes(raw[..4].try_into().unwrap()) as usize;
        raw = &raw[4..];
        if raw.len() < len {
            bail!("message {} is truncated", out.len() + 1);
        }
        out.push(raw[..len].to_vec());
        raw = &raw[len..];
    }
    Ok(out)
}

/// Splits into windows of exactly `len` messages, in order.
pub fn batches(messages: Vec<Vec<u8>>, len: usize) -> Result<Vec<Vec<Vec<u8>>>> {
    if messages.is_empty() {
        bail!("the message stream is empty");
    }
    if !messages.len().is_multiple_of(len) {
        bail!(
            "{} messages do not fill batches of {len}; the last batch would hold {}",
            messages.len(),
            messages.len() % len
        );
    }
    let mut out = Vec::with_capacity(messages.len() / len);
    let mut it = messages.into_iter();
    loop {
        let batch: Vec<_> = it.by_ref().take(len).collect();
        if batch.is_empty() {
            return Ok(out);
        }
        out.push(batch);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_and_without_header() {
        let data = b"ts,payload\n1,abc\n2,\"d,e\"\n";
        assert_eq!(parse_csv(data, true).unwrap(), vec![b"abc".to_vec(), b"d,e".to_vec()]);
        assert_eq!(parse_csv(data, false).unwrap().len(), 3);
        assert!(parse_csv(b"1,2,3\n", false).is_err());
    }

    #[test]
    fn binary_framing() {
        let data = [0, 0, 0, 2, b'h', b'i', 0, 0, 0, 0];
        assert_eq!(parse_bin(&data).unwrap(), vec![b"hi".to_vec(), vec![]]);
        assert!(parse_bin(&data[..5]).is_err());
        assert!(parse_bin(&data[..8]).is_err());
    }

    #[test]
    fn partial_batch_rejected() {
        let msgs = |n: u8| (0..n).map(|i| vec![i]).collect::<Vec<_>>();
        assert_eq!(batches(msgs(6), 3).unwrap().len(), 2);
        assert!(batches(msgs(7), 3).is_err());
        assert!(batches(msgs(0), 1).is_err());
        assert_eq!(batches(msgs(4), 2).unwrap()[1], vec![vec![2], vec![3]]);
    }
}
