//! Commitment Construct Oracle.
//!
//! Holds the master secrets and chain anchors of every provisioned signer
//! and answers per-epoch commitment requests. It never verifies signatures
//! and never returns secret material. The service is unauthenticated:
//! deployments that need authenticated commitments must add a transport
//! layer (TLS, enclave attestation) in front of it.

mod protocol;
mod server;
mod store;

pub use protocol::{
    read_frame, write_frame, Request, Response, Status, MAX_EXPORT, MAX_FRAME, MSG_EXPORT, MSG_HY,
    MSG_LA, MSG_PQ, RESPONSE_BIT,
};
pub use server::{CcoClient, ClientError, ServerHandle};
pub use store::{CcoStore, Provisioning, SharedStore};
