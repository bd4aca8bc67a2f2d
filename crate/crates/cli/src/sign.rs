use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use hases_core::container::encode_list;

use crate::files::{write_atomic, SignerKey};
use crate::stream::{batches, read_messages};
use crate::Input;

fn batch_len(key: &SignerKey) -> usize {
    match key {
        SignerKey::Pq(_) => 1,
        SignerKey::La(s) => s.params().batch_len,
        SignerKey::Hy(s) => s.la().params().batch_len,
    }
}

/// Signs every batch on a copy of the state; the key file is replaced
/// before any signature is written, so a crash can lose signatures but
/// never reuse an epoch.
pub fn run(key_path: &Path, input: &Input, out: &Path) -> Result<()> {
    let mut key = SignerKey::load(key_path)?;
    let messages = read_messages(&input.input, input.format, !input.no_header)?;
    let batches = batches(messages, batch_len(&key))?;

    let first_epoch = match &key {
        SignerKey::Pq(s) => s.epoch(),
        SignerKey::La(s) => s.epoch(),
        SignerKey::Hy(s) => s.epoch(),
    };
    let sigs = batches
        .iter()
        .map(|batch| {
            Ok(match &mut key {
                SignerKey::Pq(s) => s.sign(&batch[0])?.to_bytes(),
                SignerKey::La(s) => s.sign(batch)?.to_bytes(),
                SignerKey::Hy(s) => s.sign(batch)?.to_bytes(),
            })
        })
        .collect::<Result<Vec<_>>>()
        .context("signing")?;

    write_atomic(key_path, &key.to_bytes())?;
    fs::write(out, encode_list(&sigs)).with_context(|| format!("writing {}", out.display()))?;
    println!(
        "signed {} batches as {} (epochs {}..={})",
        sigs.len(),
        key.id(),
        first_epoch,
        first_epoch + sigs.len() as u64 - 1
    );
    Ok(())
}
