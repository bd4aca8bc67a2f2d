//! Desk-scale reproduction of the hash-count and size figures. Hash counts
//! come from the instrumented counters; times are wall-clock means.

use std::time::{Duration, Instant};

use anyhow::{ensure, Result};
use hases_core::hash::count_calls;
use hases_core::hy::{self, HyParams};
use hases_core::la::{self, LaAggSignature, LaParams};
use hases_core::pq::{self, PqParams};
use hases_core::{Group, HashCounters, MasterKey, Scheme, SignerId};

use crate::Dims;

#[derive(Default)]
struct Report {
    /// (key, hash calls per op, mean time per op)
    ops: Vec<(String, u64, Duration)>,
    /// (key, value, unit)
    figures: Vec<(String, u64, &'static str)>,
}

impl Report {
    /// Runs `op` `iters` times; the hash count must be the same every time.
    fn op(&mut self, key: &str, iters: u32, mut op: impl FnMut(u32)) -> Result<u64> {
        let mut calls: Option<HashCounters> = None;
        let started = Instant::now();
        for i in 0..iters {
            let ((), c) = count_calls(|| op(i));
            if let Some(prev) = calls {
                ensure!(prev.total() == c.total(), "{key}: hash count varies between runs");
            }
            calls = Some(c);
        }
        let total = calls.map_or(0, |c| c.total());
        self.ops.push((key.to_string(), total, started.elapsed() / iters.max(1)));
        Ok(total)
    }

    fn figure(&mut self, key: &str, value: u64, unit: &'static str) {
        self.figures.push((key.to_string(), value, unit));
    }

    fn print(&self) {
        println!("{:<28} {:>12} {:>14}", "operation", "hash calls", "mean time");
        for (key, calls, time) in &self.ops {
            println!("{key:<28} {calls:>12} {:>14}", format!("{time:.2?}"));
        }
        println!();
        println!("{:<28} {:>12}", "figure", "value");
        for (key, value, unit) in &self.figures {
            println!("{key:<28} {:>12}", format!("{value} {unit}"));
        }
        println!();
        for (key, calls, time) in &self.ops {
            println!("{key}.hash_calls={calls}");
            println!("{key}.mean_ns={}", time.as_nanos());
        }
        for (key, value, unit) in &self.figures {
            println!("{key}.{unit}={value}");
        }
    }
}

fn id() -> SignerId {
    SignerId::new([0xbe; 16])
}

fn batch(i: u32, len: usize) -> Vec<Vec<u8>> {
    (0..len).map(|l| format!("sample {i}/{l}").into_bytes()).collect()
}

fn pq_params(dims: Dims) -> Result<PqParams> {
    ensure!(dims.anchors > 0 && dims.epochs.is_multiple_of(dims.anchors), "J1 must divide J");
    Ok(PqParams::standard(dims.anchors, dims.epochs / dims.anchors)?)
}

fn bench_pq(r: &mut Report, dims: Dims, iters: u32) -> Result<()> {
    let params = pq_params(dims)?;
    let iters = iters.min(params.epochs() as u32);
    let mut keys = pq::keygen_with_master(MasterKey::from_bytes([1; 32]), &[id()], params)?;
    let mut sigs = Vec::new();
    r.op("pq.sign", iters, |i| sigs.push(keys.signers[0].sign(&batch(i, 1)[0]).unwrap()))?;
    let commitments: Vec<_> =
        sigs.iter().map(|s| keys.material.construct_commitment(&id(), s.epoch).unwrap()).collect();
    r.op("pq.verify", iters, |i| {
        let i = i as usize;
        assert!(pq::verify(&params, &commitments[i], &batch(i as u32, 1)[0], &sigs[i]).is_ok());
    })?;
    // the first anchor segment covers every chain distance 0..J2-1
    let mut worst = 0;
    r.op("pq.commitment.first_epoch", 1, |_| {
        keys.material.construct_commitment(&id(), 1).unwrap();
    })?;
    for j in 1..=params.j2 {
        let (_, c) = count_calls(|| keys.material.construct_commitment(&id(), j).unwrap());
        worst = worst.max(c.calls_h1 - params.t as u64);
    }
    r.figure("pq.commitment.worst_chain", worst, "hashes");
    r.figure("pq.signature.payload", sigs[0].payload_len() as u64, "bytes");
    r.figure("pq.signature.serialized", sigs[0].to_bytes().len() as u64, "bytes");
    r.figure("pq.commitment.serialized", commitments[0].to_bytes().len() as u64, "bytes");
    r.figure("pq.oracle.anchors", keys.material.anchor_bytes_per_signer() as u64, "bytes");
    r.figure("pq.params.j1", params.j1, "count");
    r.figure("pq.params.j2", params.j2, "count");
    Ok(())
}

fn bench_la(r: &mut Report, dims: Dims, iters: u32, group: &Group) -> Result<()> {
    let params = LaParams::new(group.clone(), dims.epochs, dims.batch)?;
    let iters = iters.min(dims.epochs as u32);
    let mut keys = la::keygen_with_master(MasterKey::from_bytes([2; 32]), &[id()], params)?;
    let y = *keys.master.public_key(&id()).unwrap();
    let mut sigs = Vec::new();
    r.op("la.sign", iters, |i| sigs.push(keys.signers[0].sign(&batch(i, dims.batch)).unwrap()))?;
    let mut commitments = Vec::new();
    r.op("la.commitment", iters, |i| {
        commitments.push(keys.master.construct_commitment(&id(), sigs[i as usize].epoch).unwrap())
    })?;
    r.op("la.verify", iters, |i| {
        let i = i as usize;
        assert!(la::verify(group, &y, &commitments[i], &batch(i as u32, dims.batch), &sigs[i]).is_ok());
    })?;
    r.figure("la.signature.payload", LaAggSignature::PAYLOAD_LEN as u64, "bytes");
    r.figure("la.signature.serialized", sigs[0].to_bytes().len() as u64, "bytes");
    r.figure("la.commitment.serialized", commitments[0].to_bytes(group).len() as u64, "bytes");
    r.figure("la.params.l", dims.batch as u64, "count");
    Ok(())
}

fn bench_hy(r: &mut Report, dims: Dims, iters: u32, group: &Group) -> Result<()> {
    let params = HyParams::new(group.clone(), dims.batch, pq_params(dims)?)?;
    let iters = iters.min(dims.epochs as u32);
    let mut keys =
        hy::keygen_with_masters(MasterKey::from_bytes([3; 32]), MasterKey::from_bytes([4; 32]), &[id()], &params)?;
    let y = *keys.master.la.public_key(&id()).unwrap();
    let mut sigs = Vec::new();
    r.op("hy.sign", iters, |i| sigs.push(keys.signers[0].sign(&batch(i, dims.batch)).unwrap()))?;
    let commitments: Vec<_> = sigs
        .iter()
        .map(|s| keys.master.construct_commitment(&id(), s.la.epoch).unwrap())
        .collect();
    r.op("hy.verify", iters, |i| {
        let i = i as usize;
        assert!(hy::verify(&params, &y, &commitments[i], &batch(i as u32, dims.batch), &sigs[i]).is_ok());
    })?;
    r.figure("hy.signature.payload", sigs[0].payload_len() as u64, "bytes");
    r.figure("hy.signature.serialized", sigs[0].to_bytes().len() as u64, "bytes");
    r.figure("hy.commitment.serialized", commitments[0].to_bytes(group).len() as u64, "bytes");
    Ok(())
}

pub fn run(scheme: Option<Scheme>, dims: Dims, iters: u32, group: Group) -> Result<()> {
    ensure!(iters > 0, "--iters must be positive");
    let mut report = Report::default();
    let all = [Scheme::Pq, Scheme::La, Scheme::Hy];
    for s in all.into_iter().filter(|s| scheme.is_none_or(|want| want == *s)) {
        match s {
            Scheme::Pq => bench_pq(&mut report, dims, iters)?,
            Scheme::La => bench_la(&mut report, dims, iters, &group)?,
            Scheme::Hy => bench_hy(&mut report, dims, iters, &group)?,
        }
    }
    report.print();
    Ok(())
}
