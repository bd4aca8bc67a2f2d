//! Length-prefixed binary framing.
//!
//! Every frame is a 4-byte big-endian length followed by that many bytes:
//! one message-type byte and the body. Request bodies:
//!
//! | type | body                                         |
//! |------|----------------------------------------------|
//! | 0x01 | id (16) · epoch (8)                          |
//! | 0x02 | id (16) · epoch (8) · L (4)                  |
//! | 0x03 | id (16) · epoch (8)                          |
//! | 0x04 | scheme (1) · id (16) · from (8) · to (8)     |
//!
//! Responses echo the type with the high bit set and carry a status byte,
//! followed on success by the serialized commitment (or, for exports, a
//! counted list of them).

use std::io::{self, Read, Write};

use crate::codec::Reader;
use crate::error::{Error, Result};
use crate::id::SignerId;
use crate::Scheme;

pub const MSG_PQ: u8 = 0x01;
pub const MSG_LA: u8 = 0x02;
pub const MSG_HY: u8 = 0x03;
pub const MSG_EXPORT: u8 = 0x04;
pub const RESPONSE_BIT: u8 = 0x80;

/// Largest accepted frame.
pub const MAX_FRAME: usize = 1 << 28;
/// Most epochs one export may cover.
pub const MAX_EXPORT: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Request {
    Pq { id: SignerId, epoch: u64 },
    La { id: SignerId, epoch: u64, batch_len: u32 },
    Hy { id: SignerId, epoch: u64 },
    Export { scheme: Scheme, id: SignerId, from: u64, to: u64 },
}

impl Request {
    pub fn message_type(&self) -> u8 {
        match self {
            Request::Pq { .. } => MSG_PQ,
            Request::La { .. } => MSG_LA,
            Request::Hy { .. } => MSG_HY,
            Request::Export { .. } => MSG_EXPORT,
        }
    }

    /// Type byte and body, without the length prefix.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = vec![self.message_type()];
        match *self {
            Request::Pq { id, epoch } | Request::Hy { id, epoch } => {
                out.extend_from_slice(id.as_bytes());
                out.extend_from_slice(&epoch.to_be_bytes());
            }
            Request::La { id, epoch, batch_len } => {
                out.extend_from_slice(id.as_bytes());
                out.extend_from_slice(&epoch.to_be_bytes());
                out.extend_from_slice(&batch_len.to_be_bytes());
            }
            Request::Export { scheme, id, from, to } => {
                out.push(scheme as u8);
                out.extend_from_slice(id.as_bytes());
                out.extend_from_slice(&from.to_be_bytes());
                out.extend_from_slice(&to.to_be_bytes());
            }
        }
        out
    }

    pub fn decode(payload: &[u8]) -> Result<Request> {
        let mut r = Reader::new(payload);
        let req = match r.u8()? {
            MSG_PQ => Request::Pq { id: r.id()?, epoch: r.u64()? },
            MSG_LA => Request::La { id: r.id()?, epoch: r.u64()?, batch_len: r.u32()? },
            MSG_HY => Request::Hy { id: r.id()?, epoch: r.u64()? },
            MSG_EXPORT => {
                let scheme = Scheme::from_tag(r.u8()?)
                    .ok_or_else(|| Error::decode("unknown scheme in export request"))?;
                Request::Export { scheme, id: r.id()?, from: r.u64()?, to: r.u64()? }
            }
            t => return Err(Error::decode(format!("unknown message type {t:#04x}"))),
        };
        r.finish()?;
        Ok(req)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Status {
    Ok = 0x00,
    UnknownId = 0x01,
    EpochRange = 0x02,
    Malformed = 0x03,
}

impl Status {
    pub fn from_byte(b: u8) -> Option<Status> {
        match b {
            0x00 => Some(Status::Ok),
            0x01 => Some(Status::UnknownId),
            0x02 => Some(Status::EpochRange),
            0x03 => Some(Status::Malformed),
            _ => None,
        }
    }

    pub fn from_error(e: &Error) -> Status {
        match e {
            Error::UnknownId(_) => Status::UnknownId,
            Error::EpochOutOfRange { .. } => Status::EpochRange,
            _ => Status::Malformed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    /// Request type with [`RESPONSE_BIT`] set.
    pub kind: u8,
    pub status: Status,
    pub body: Vec<u8>,
}

impl Response {
    pub fn ok(request_type: u8, body: Vec<u8>) -> Self {
        Response { kind: request_type | RESPONSE_BIT, status: Status::Ok, body }
    }

    pub fn error(request_type: u8, status: Status) -> Self {
        Response { kind: request_type | RESPONSE_BIT, status, body: Vec::new() }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 + self.body.len());
        out.push(self.kind);
        out.push(self.status as u8);
        out.extend_from_slice(&self.body);
        out
    }

    pub fn decode(payload: &[u8]) -> Result<Response> {
        let mut r = Reader::new(payload);
        let kind = r.u8()?;
        if kind & RESPONSE_BIT == 0 {
            return Err(Error::decode("not a response frame"));
        }
        let status = Status::from_byte(r.u8()?).ok_or_else(|| Error::decode("unknown status byte"))?;
        Ok(Response { kind, status, body: r.rest().to_vec() })
    }
}

pub fn write_frame<W: Write>(w: &mut W, payload: &[u8]) -> io::Result<()> {
    let len = u32::try_from(payload.len())
        .ok()
        .filter(|&l| l as usize <= MAX_FRAME)
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "frame too large"))?;
    w.write_all(&len.to_be_bytes())?;
    w.write_all(payload)?;
    w.flush()
}

/// Reads one frame. `Ok(None)` on clean end of stream before a length
/// prefix.
pub fn read_frame<R: Read>(r: &mut R, max: usize) -> io::Result<Option<Vec<u8>>> {
    let mut len = [0u8; 4];
    match r.read_exact(&mut len) {
        Ok(()) => {}
        Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => return Ok(None),
        Err(e) => return Err(e),
    }
    let len = u32::from_be_bytes(len) as usize;
    if len == 0 || len > max {
        return Err(io::Error::new(io::ErrorKind::InvalidData, format!("bad frame length {len}")));
    }
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)?;
    Ok(Some(buf))
}
