use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Output, Stdio};

use tempfile::TempDir;

fn hases(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hases"))
        .args(args)
        .env_remove("HASES_BACKEND")
        .output()
        .expect("spawn hases")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Oracle child process, killed on drop.
struct Oracle {
    child: Child,
    addr: String,
}

impl Oracle {
    fn start(keys: &[&Path]) -> Oracle {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_hases"));
        cmd.args(["serve", "--listen", "127.0.0.1:0"]);
        for k in keys {
            cmd.args(["--keys", p(k)]);
        }
        let mut child = cmd.stdout(Stdio::piped()).stderr(Stdio::inherit()).spawn().unwrap();
        let mut line = String::new();
        BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
        let addr = line
            .strip_prefix("listening on ")
            .and_then(|rest| rest.split_whitespace().next())
            .unwrap_or_else(|| panic!("unexpected oracle banner {line:?}"))
            .to_string();
        Oracle { child, addr }
    }
}

impl Drop for Oracle {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

struct Setup {
    dir: TempDir,
    keys: PathBuf,
}

impl Setup {
    fn new(scheme: &str, extra: &[&str]) -> Setup {
        let dir = TempDir::new().unwrap();
        let ids = dir.path().join("ids.txt");
        fs::write(&ids, "sensor-a\nsensor-b\n000102030405060708090a0b0c0d0e0f\n").unwrap();
        let keys = dir.path().join("keys");
        let mut args = vec!["keygen", "--scheme", scheme, "--ids", p(&ids), "--out", p(&keys)];
        args.extend_from_slice(extra);
        let out = hases(&args);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        Setup { dir, keys }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn key(&self, id: &str) -> PathBuf {
        let mut name = hex(id.as_bytes());
        name.push_str(&"00".repeat(16 - id.len()));
        self.keys.join("signers").join(format!("{name}.key"))
    }

    fn write_csv(&self, name: &str, records: usize) -> PathBuf {
        let mut text = String::from("timestamp,payload\n");
        for i in 0..records {
            text.push_str(&format!("{},\"ax={} ay={},gz\"\n", 1000 + i, i, i * 7));
        }
        let path = self.path(name);
        fs::write(&path, text).unwrap();
        path
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn round_trip(scheme: &str, batch: usize) {
    let s = Setup::new(scheme, &["--epochs", "64", "--anchors", "4", "--batch", &batch.to_string()]);
    let oracle = Oracle::start(&[&s.keys]);
    let input = s.write_csv("stream.csv", 3 * batch);
    let sigs = s.path("stream.sig");
    let public = s.keys.join("public.bin");

    let out = hases(&["sign", "--key", p(&s.key("sensor-b")), "--input", p(&input), "--out", p(&sigs)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let out = hases(&["verify", "--public", p(&public), "--input", p(&input), "--sigs", p(&sigs), "--cco", &oracle.addr]);
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("3 of 3 batches valid"));

    // offline mode via an export
    let export = s.path("export.bin");
    let id = format!("{}{}", hex(b"sensor-b"), "00".repeat(8));
    let out = hases(&[
        "request", "--cco", &oracle.addr, "--scheme", scheme, "--id", &id, "--from", "1", "--to", "3", "--out",
        p(&export),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = hases(&["verify", "--public", p(&public), "--input", p(&input), "--sigs", p(&sigs), "--commitments", p(&export)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));

    // a second stream continues at epoch 4
    let input2 = s.write_csv("stream2.csv", batch);
    let sigs2 = s.path("stream2.sig");
    let out = hases(&["sign", "--key", p(&s.key("sensor-b")), "--input", p(&input2), "--out", p(&sigs2)]);
    assert!(stdout(&out).contains("epochs 4..=4"), "{}", stdout(&out));
    let out = hases(&["verify", "--public", p(&public), "--input", p(&input2), "--sigs", p(&sigs2), "--cco", &oracle.addr]);
    assert_eq!(code(&out), 0);
    // not covered by the export
    let out = hases(&["verify", "--public", p(&public), "--input", p(&input2), "--sigs", p(&sigs2), "--commitments", p(&export)]);
    assert_eq!(code(&out), 1);

    // corrupt the last byte of the last signature: cryptographic reject
    let mut bytes = fs::read(&sigs).unwrap();
    *bytes.last_mut().unwrap() ^= 0x40;
    fs::write(&sigs, &bytes).unwrap();
    let out = hases(&["verify", "--public", p(&public), "--input", p(&input), "--sigs", p(&sigs), "--cco", &oracle.addr]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    assert!(stdout(&out).contains("2 of 3 batches valid"));

    // messages that differ from what was signed
    let other = s.write_csv("other.csv", 3 * batch + 1);
    let trimmed: String = fs::read_to_string(&other).unwrap().lines().take(1 + 3 * batch).skip(1).map(|l| format!("{l}x\n")).collect();
    fs::write(&other, format!("timestamp,payload\n{trimmed}")).unwrap();
    let out = hases(&["verify", "--public", p(&public), "--input", p(&other), "--sigs", p(&sigs2), "--cco", &oracle.addr]);
    assert_eq!(code(&out), 2, "batch-count mismatch is operational");
}

#[test]
fn pq_round_trip() {
    round_trip("pq", 1);
}

#[test]
fn la_round_trip() {
    round_trip("la", 4);
}

#[test]
fn hy_round_trip() {
    round_trip("hy", 3);
}

#[test]
fn duplicate_id_leaves_no_output() {
    let dir = TempDir::new().unwrap();
    let ids = dir.path().join("ids.txt");
    fs::write(&ids, "alpha\nbeta\nalpha\n").unwrap();
    let out_dir = dir.path().join("keys");
    let out = hases(&["keygen", "--scheme", "pq", "--ids", p(&ids), "--epochs", "16", "--anchors", "4", "--out", p(&out_dir)]);
    assert_ne!(code(&out), 0);
    assert!(!out_dir.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn keygen_rejects_non_divisor() {
    let dir = TempDir::new().unwrap();
    let ids = dir.path().join("ids.txt");
    fs::write(&ids, "alpha\n").unwrap();
    let out = hases(&["keygen", "--scheme", "hy", "--ids", p(&ids), "--J", "100", "--J1", "8", "--out", p(&dir.path().join("k"))]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not divide"));
}

#[test]
fn pq_single_anchor_secret_is_32_bytes() {
    let s = Setup::new("pq", &["--epochs", "16", "--J1", "1"]);
    assert_eq!(fs::metadata(s.keys.join("cco.secret")).unwrap().len(), 32);
    let hy = Setup::new("hy", &["--epochs", "16", "--J1", "1", "--L", "2"]);
    assert_eq!(fs::metadata(hy.keys.join("cco.secret")).unwrap().len(), 64);
}

#[test]
fn partial_batch_is_refused_without_advancing() {
    let s = Setup::new("la", &["--epochs", "16", "--batch", "4"]);
    let key = s.key("sensor-a");
    let before = fs::read(&key).unwrap();
    let input = s.write_csv("short.csv", 6);
    let out = hases(&["sign", "--key", p(&key), "--input", p(&input), "--out", p(&s.path("x.sig"))]);
    assert_eq!(code(&out), 2);
    assert_eq!(fs::read(&key).unwrap(), before);
    assert!(!s.path("x.sig").exists());
}

#[test]
fn binary_stream_and_tiny_backend() {
    let dir = TempDir::new().unwrap();
    let ids = dir.path().join("ids.txt");
    fs::write(&ids, "t\n").unwrap();
    let keys = dir.path().join("keys");
    let out = Command::new(env!("CARGO_BIN_EXE_hases"))
        .args(["keygen", "--scheme", "la", "--ids", p(&ids), "--epochs", "8", "--batch", "2", "--out", p(&keys)])
        .env("HASES_BACKEND", "tiny")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let mut stream = Vec::new();
    for m in [&b"one"[..], b"", b"three", b"four"] {
        stream.extend_from_slice(&(m.len() as u32).to_be_bytes());
        stream.extend_from_slice(m);
    }
    let input = dir.path().join("s.bin");
    fs::write(&input, stream).unwrap();
    let key = keys.join("signers").join(format!("{}{}.key", hex(b"t"), "00".repeat(15)));
    let sigs = dir.path().join("s.sig");
    let out = hases(&["sign", "--key", p(&key), "--input", p(&input), "--format", "bin", "--out", p(&sigs)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let oracle = Oracle::start(&[&keys]);
    let public = keys.join("public.bin");
    let out = hases(&["verify", "--public", p(&public), "--input", p(&input), "--format", "bin", "--sigs", p(&sigs), "--cco", &oracle.addr]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn unreachable_oracle_is_operational() {
    let s = Setup::new("pq", &["--epochs", "8", "--anchors", "2"]);
    let input = s.write_csv("m.csv", 1);
    let sigs = s.path("m.sig");
    assert_eq!(code(&hases(&["sign", "--key", p(&s.key("sensor-a")), "--input", p(&input), "--out", p(&sigs)])), 0);
    let out = hases(&["verify", "--public", p(&s.keys.join("public.bin")), "--input", p(&input), "--sigs", p(&sigs), "--cco", "127.0.0.1:1"]);
    assert_eq!(code(&out), 2);
    let out = hases(&["verify", "--public", p(&s.keys.join("public.bin")), "--input", p(&input), "--sigs", p(&s.path("missing"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bench_reports_pq_sign_hash_count() {
    let out = hases(&["bench", "--scheme", "pq", "--epochs", "64", "--anchors", "8", "--iters", "10"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "pq.sign.hash_calls=18"), "{text}");
    assert!(text.lines().any(|l| l == "pq.signature.payload.bytes=512"));
    assert!(text.lines().any(|l| l == "pq.commitment.worst_chain.hashes=7"));
}
