use std::io::{self, BufReader, BufWriter};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};

use thiserror::Error;

use crate::container::decode_list;
use crate::group::Group;
use crate::hy::HyCommitment;
use crate::id::SignerId;
use crate::la::LaCommitment;
use crate::pq::PqCommitment;
use crate::Scheme;

use super::protocol::{read_frame, write_frame, Request, Response, Status, MAX_FRAME};
use super::store::SharedStore;

/// Request frames are tiny; anything bigger is hostile.
const MAX_REQUEST: usize = 64;

/// Background TCP listener. One thread per connection; each request takes
/// a read lock on the store.
pub struct ServerHandle {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    thread: Option<JoinHandle<()>>,
}

impl ServerHandle {
    pub fn spawn<A: ToSocketAddrs>(addr: A, store: SharedStore) -> io::Result<ServerHandle> {
        let listener = TcpListener::bind(addr)?;
        let addr = listener.local_addr()?;
        let stop = Arc::new(AtomicBool::new(false));
        let flag = stop.clone();
        let thread = thread::spawn(move || accept_loop(listener, store, flag));
        Ok(ServerHandle { addr, stop, thread: Some(thread) })
    }

    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    /// Blocks until the accept loop exits (normally never).
    pub fn join(mut self) {
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }

    pub fn shutdown(mut self) {
        self.stop_inner();
    }

    fn stop_inner(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // wake the blocking accept
        let _ = TcpStream::connect(self.addr);
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for ServerHandle {
    fn drop(&mut self) {
        if self.thread.is_some() {
            self.stop_inner();
        }
    }
}

fn accept_loop(listener: TcpListener, store: SharedStore, stop: Arc<AtomicBool>) {
    for conn in listener.incoming() {
        if stop.load(Ordering::SeqCst) {
            break;
        }
        let Ok(stream) = conn else { continue };
        let store = store.clone();
        thread::spawn(move || {
            let _ = serve_connection(stream, store);
        });
    }
}

fn serve_connection(stream: TcpStream, store: SharedStore) -> io::Result<()> {
    stream.set_nodelay(true)?;
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut writer = BufWriter::new(stream);
    loop {
        let frame = match read_frame(&mut reader, MAX_REQUEST) {
            Ok(Some(f)) => f,
            Ok(None) => return Ok(()),
            Err(e) if e.kind() == io::ErrorKind::InvalidData => {
                write_frame(&mut writer, &Response::error(0, Status::Malformed).encode())?;
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        let resp = store.read().handle_bytes(&frame);
        write_frame(&mut writer, &resp.encode())?;
    }
}

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("oracle answered {0:?}")]
    Status(Status),
    #[error(transparent)]
    Decode(#[from] crate::error::Error),
}

/// Blocking client holding one connection.
pub struct CcoClient {
    reader: BufReader<TcpStream>,
    writer: BufWriter<TcpStream>,
}

impl CcoClient {
    pub fn connect<A: ToSocketAddrs>(addr: A) -> io::Result<CcoClient> {
        let stream = TcpStream::connect(addr)?;
        stream.set_nodelay(true)?;
        Ok(CcoClient {
            reader: BufReader::new(stream.try_clone()?),
            writer: BufWriter::new(stream),
        })
    }

    pub fn request(&mut self, req: &Request) -> io::Result<Response> {
        self.raw(&req.encode())
    }

    /// Sends an arbitrary payload; used to probe error handling.
    pub fn raw(&mut self, payload: &[u8]) -> io::Result<Response> {
        write_frame(&mut self.writer, payload)?;
        let frame = read_frame(&mut self.reader, MAX_FRAME)?
            .ok_or_else(|| io::Error::new(io::ErrorKind::UnexpectedEof, "oracle closed the connection"))?;
        Response::decode(&frame).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))
    }

    fn body(&mut self, req: &Request) -> Result<Vec<u8>, ClientError> {
        let resp = self.request(req)?;
        match resp.status {
            Status::Ok => Ok(resp.body),
            s => Err(ClientError::Status(s)),
        }
    }

    pub fn pq_commitment(&mut self, id: SignerId, epoch: u64) -> Result<PqCommitment, ClientError> {
        Ok(PqCommitment::from_bytes(&self.body(&Request::Pq { id, epoch })?)?)
    }

    pub fn la_commitment(
        &mut self,
        group: &Group,
        id: SignerId,
        epoch: u64,
        batch_len: u32,
    ) -> Result<LaCommitment, ClientError> {
        let body = self.body(&Request::La { id, epoch, batch_len })?;
        Ok(LaCommitment::from_bytes(&body, group)?)
    }

    pub fn hy_commitment(&mut self, group: &Group, id: SignerId, epoch: u64) -> Result<HyCommitment, ClientError> {
        Ok(HyCommitment::from_bytes(&self.body(&Request::Hy { id, epoch })?, group)?)
    }

    /// Raw export container for `from..=to`.
    pub fn export(&mut self, scheme: Scheme, id: SignerId, from: u64, to: u64) -> Result<Vec<u8>, ClientError> {
        let body = self.body(&Request::Export { scheme, id, from, to })?;
        decode_list(&body)?;
        Ok(body)
    }
}
