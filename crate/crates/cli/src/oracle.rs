use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use hases_core::cco::{CcoClient, CcoStore, Provisioning, ServerHandle};
use hases_core::container::decode_list;
use hases_core::{hy, la, pq, Scheme, SignerId};

use crate::files::{decode_secret, PublicInfo, Params, PUBLIC_FILE, SECRET_FILE};

/// Rebuilds the oracle material of one key directory from its master
/// key(s), and checks it against the published public keys.
fn provisioning(dir: &Path) -> Result<Provisioning> {
    let info = PublicInfo::load(&dir.join(PUBLIC_FILE))?;
    let secret_path = dir.join(SECRET_FILE);
    let raw = fs::read(&secret_path).with_context(|| format!("reading {}", secret_path.display()))?;
    let mut msk = decode_secret(&raw, info.params.scheme())?.into_iter();
    let ids = info.ids();
    let (prov, public_keys) = match &info.params {
        Params::Pq(p) => (Provisioning::Pq(pq::keygen_with_master(msk.next().unwrap(), &ids, *p)?.material), None),
        Params::La(p) => {
            let m = la::keygen_with_master(msk.next().unwrap(), &ids, p.clone())?.master;
            let keys = m.public_keys().clone();
            (Provisioning::La(m), Some(keys))
        }
        Params::Hy(p) => {
            let m = hy::keygen_with_masters(msk.next().unwrap(), msk.next().unwrap(), &ids, p)?.master;
            let keys = m.la.public_keys().clone();
            (Provisioning::Hy(m), Some(keys))
        }
    };
    if let Some(keys) = public_keys {
        ensure!(
            keys.into_iter().all(|(id, y)| info.keys.get(&id) == Some(&Some(y))),
            "{} does not match the public keys in {}",
            SECRET_FILE,
            dir.display()
        );
    }
    Ok(prov)
}

pub fn serve(dirs: &[PathBuf], listen: SocketAddr, anchors: Option<u64>) -> Result<()> {
    let mut store = CcoStore::new();
    for dir in dirs {
        store
            .provision(provisioning(dir).with_context(|| format!("loading {}", dir.display()))?)
            .with_context(|| format!("provisioning {}", dir.display()))?;
    }
    if let Some(j1) = anchors {
        store.set_storage_policy(j1)?;
    }
    let counts = [Scheme::Pq, Scheme::La, Scheme::Hy].map(|s| store.signer_count(s));
    let anchor_bytes = store.anchor_bytes();
    let server = ServerHandle::spawn(listen, store.into_shared())?;
    println!(
        "listening on {} (pq {}, la {}, hy {} signers; {} anchor bytes)",
        server.local_addr(),
        counts[0],
        counts[1],
        counts[2],
        anchor_bytes
    );
    std::io::stdout().flush()?;
    server.join();
    Ok(())
}

pub fn request(cco: SocketAddr, scheme: Scheme, id: &SignerId, from: u64, to: u64, out: &Path) -> Result<()> {
    let mut client = CcoClient::connect(cco).with_context(|| format!("connecting to {cco}"))?;
    let body = client.export(scheme, *id, from, to).context("batch export")?;
    let n = decode_list(&body)?.len();
    fs::write(out, &body).with_context(|| format!("writing {}", out.display()))?;
    println!("{n} commitments for {id} written to {}", out.display());
    Ok(())
}
