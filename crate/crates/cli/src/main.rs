//! `hases`: key ceremonies, signing and verification of message streams,
//! the commitment oracle, and a hash-count benchmark.
//!
//! Exit codes: 0 valid / success, 1 cryptographic rejection, 2 any
//! operational error (I/O, framing, bad parameters, oracle unreachable).

mod bench;
mod files;
mod keygen;
mod oracle;
mod sign;
mod stream;
mod verify;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hases_core::{Group, Scheme};

use crate::stream::Format;

#[derive(Parser)]
#[command(name = "hases", version, about)]
struct Cli {
    /// Group backend for the aggregate and hybrid schemes.
    #[arg(long, env = "HASES_BACKEND", value_enum, default_value_t = Backend::Production, global = true)]
    backend: Backend,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    /// p = 23, q = 11; for tests only.
    Tiny,
    Production,
}

impl Backend {
    fn group(self) -> Group {
        match self {
            Backend::Tiny => Group::small_test(),
            Backend::Production => Group::production(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Pq,
    La,
    Hy,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Pq => Scheme::Pq,
            SchemeArg::La => Scheme::La,
            SchemeArg::Hy => Scheme::Hy,
        }
    }
}

/// Key schedule dimensions shared by `keygen` and `bench`.
#[derive(clap::Args, Debug, Clone, Copy)]
pub struct Dims {
    /// Total epochs J.
    #[arg(long = "epochs", visible_alias = "J", default_value_t = 1024)]
    pub epochs: u64,
    /// Chain anchors J1 kept by the oracle; must divide J.
    #[arg(long = "anchors", visible_alias = "J1", default_value_t = 32)]
    pub anchors: u64,
    /// Messages per batch L (aggregate and hybrid schemes).
    #[arg(long = "batch", visible_alias = "L", default_value_t = 8)]
    pub batch: usize,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Input {
    /// Message stream.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// The CSV input has no header row.
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate keys for a list of signer ids.
    Keygen {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        /// One id per line: 32 hex digits or up to 16 bytes of text.
        #[arg(long)]
        ids: PathBuf,
        #[command(flatten)]
        dims: Dims,
        /// Output directory; must not exist or be empty.
        #[arg(long)]
        out: PathBuf,
    },
    /// Sign a message stream, advancing the key file.
    Sign {
        #[arg(long)]
        key: PathBuf,
        #[command(flatten)]
        input: Input,
        /// Signature container to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a signature container against a message stream.
    Verify {
        /// Public registry written by keygen.
        #[arg(long)]
        public: PathBuf,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        sigs: PathBuf,
        /// Fetch commitments from a running oracle.
        #[arg(long, conflicts_with = "commitments", required_unless_present = "commitments")]
        cco: Option<SocketAddr>,
        /// Use a commitment export instead (offline mode).
        #[arg(long)]
        commitments: Option<PathBuf>,
    },
    /// Run the commitment oracle.
    Serve {
        /// Key directories written by keygen; may repeat.
        #[arg(long = "keys", required = true)]
        keys: Vec<PathBuf>,
        #[arg(long, default_value = "127.0.0.1:7700")]
        listen: SocketAddr,
        /// Re-split hash-chain anchors to J1 before serving.
        #[arg(long = "anchors", visible_alias = "J1")]
        anchors: Option<u64>,
    },
    /// Download a commitment export for offline verification.
    Request {
        #[arg(long)]
        cco: SocketAddr,
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        id: String,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report hash counts, sizes and timings.
    Bench {
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        #[command(flatten)]
        dims: Dims,
        /// Timed repetitions per operation.
        #[arg(long, default_value_t = 100)]
        iters: u32,
    },
}

/// Outcome of a command that can reject cryptographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Rejected,
}

fn run(cli: Cli) -> Result<Verdict> {
    let group = cli.backend.group();
    match cli.command {
        Command::Keygen { scheme, ids, dims, out } => keygen::run(scheme.into(), &ids, dims, group, &out)?,
        Command::Sign { key, input, out } => sign::run(&key, &input, &out)?,
        Command::Verify { public, input, sigs, cco, commitments } => {
            let source = match (cco, commitments) {
                (Some(addr), None) => verify::Source::Online(addr),
                (None, Some(path)) => verify::Source::Offline(path),
                _ => bail!("exactly one of --cco and --commitments is required"),
            };
            return verify::run(&public, &input, &sigs, source);
        }
        Command::Serve { keys, listen, anchors } => oracle::serve(&keys, listen, anchors)?,
        Command::Request { cco, scheme, id, from, to, out } => {
            oracle::request(cco, scheme.into(), &files::parse_id(&id)?, from, to, &out)?
        }
        Command::Bench { scheme, dims, iters } => bench::run(scheme.map(Into::into), dims, iters, group)?,
    }
    Ok(Verdict::Valid)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Verdict::Valid) => ExitCode::SUCCESS,
        Ok(Verdict::Rejected) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
