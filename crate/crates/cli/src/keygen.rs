use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hases_core::hy::{self, HyParams};
use hases_core::la::{self, LaParams};
use hases_core::pq::{self, PqParams};
use hases_core::{Group, Scheme};
use rand::rngs::OsRng;

use crate::files::{encode_secret, read_ids, Params, PublicInfo, SignerKey, PUBLIC_FILE, SECRET_FILE, SIGNER_DIR};
use crate::Dims;

pub fn params_for(scheme: Scheme, dims: Dims, group: Group) -> Result<Params> {
    let pq = || -> Result<PqParams> {
        if dims.anchors == 0 || !dims.epochs.is_multiple_of(dims.anchors) {
            bail!("J1 = {} does not divide J = {}", dims.anchors, dims.epochs);
        }
        Ok(PqParams::standard(dims.anchors, dims.epochs / dims.anchors)?)
    };
    Ok(match scheme {
        Scheme::Pq => Params::Pq(pq()?),
        Scheme::La => Params::La(LaParams::new(group, dims.epochs, dims.batch)?),
        Scheme::Hy => Params::Hy(HyParams::new(group, dims.batch, pq()?)?),
    })
}

/// Everything a ceremony writes, built in memory before touching disk.
struct Output {
    public: PublicInfo,
    secret: Vec<u8>,
    signers: Vec<SignerKey>,
}

fn generate(params: Params, ids: &[hases_core::SignerId]) -> Result<Output> {
    let mut rng = OsRng;
    Ok(match &params {
        Params::Pq(p) => {
            let keys = pq::keygen(&mut rng, ids, *p)?;
            Output {
                secret: encode_secret(&[keys.material.master_key()]),
                public: PublicInfo { keys: ids.iter().map(|i| (*i, None)).collect(), params },
                signers: keys.signers.into_iter().map(SignerKey::Pq).collect(),
            }
        }
        Params::La(p) => {
            let keys = la::keygen(&mut rng, ids, p.clone())?;
            Output {
                secret: encode_secret(&[keys.master.master_key()]),
                public: PublicInfo {
                    keys: keys.master.public_keys().iter().map(|(i, y)| (*i, Some(*y))).collect(),
                    params,
                },
                signers: keys.signers.into_iter().map(SignerKey::La).collect(),
            }
        }
        Params::Hy(p) => {
            let keys = hy::keygen(&mut rng, ids, p)?;
            Output {
                secret: encode_secret(&[keys.master.la.master_key(), keys.master.pq.master_key()]),
                public: PublicInfo {
                    keys: keys.master.la.public_keys().iter().map(|(i, y)| (*i, Some(*y))).collect(),
                    params,
                },
                signers: keys.signers.into_iter().map(SignerKey::Hy).collect(),
            }
        }
    })
}

fn write_output(dir: &Path, out: &Output) -> Result<()> {
    fs::create_dir_all(dir.join(SIGNER_DIR))?;
    fs::write(dir.join(PUBLIC_FILE), out.public.to_bytes())?;
    fs::write(dir.join(SECRET_FILE), &out.secret)?;
    for s in &out.signers {
        fs::write(dir.join(SIGNER_DIR).join(format!("{}.key", s.id())), s.to_bytes())?;
    }
    Ok(())
}

/// Writes into a sibling staging directory and renames it into place, so a
/// failure leaves no partial output.
pub fn run(scheme: Scheme, ids_path: &Path, dims: Dims, group: Group, out: &Path) -> Result<()> {
    if out.exists() && fs::read_dir(out)?.next().is_some() {
        bail!("{} exists and is not empty", out.display());
    }
    let ids = read_ids(ids_path)?;
    let params = params_for(scheme, dims, group)?;
    let output = generate(params, &ids).context("key generation")?;

    let mut staging = out.as_os_str().to_owned();
    staging.push(format!(".partial-{}", std::process::id()));
    let staging = Path::new(&staging);
    if let Err(e) = write_output(staging, &output) {
        let _ = fs::remove_dir_all(staging);
        return Err(e.context(format!("writing {}", staging.display())));
    }
    if out.exists() {
        fs::remove_dir(out)?;
    }
    fs::rename(staging, out).with_context(|| format!("moving keys into {}", out.display()))?;
    println!(
        "{} signers, scheme {}, oracle secret {} bytes, written to {}",
        output.signers.len(),
        scheme.name(),
        output.secret.len(),
        out.display()
    );
    Ok(())
}
