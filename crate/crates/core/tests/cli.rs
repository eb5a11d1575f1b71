use std::path::Path;
use std::process::{Command, Output};

use omflip_crypt::{parse_key, serialize_key};

const BIN: &str = env!("CARGO_BIN_EXE_omflip");

fn omflip(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn sample() -> String {
    format!("{}/tests/data/cameraman.pgm", env!("CARGO_MANIFEST_DIR"))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn keygen_encrypt_decrypt_is_byte_exact() {
    let dir = tempfile::tempdir().unwrap();
    let (key, ct, out) = (
        dir.path().join("k"),
        dir.path().join("c"),
        dir.path().join("o.pgm"),
    );
    let input = sample();

    assert_eq!(
        omflip(&["keygen", "--in", &input, "--seed", "0x2A", "--key", p(&key)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        omflip(&["encrypt", "--in", &input, "--key", p(&key), "--out", p(&ct)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        omflip(&[
            "decrypt",
            "--in",
            p(&ct),
            "--key",
            p(&key),
            "--out",
            p(&out)
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&input).unwrap());
    assert!(std::fs::read(&ct).unwrap().starts_with(b"OMFC1"));
}

#[test]
fn duplicate_plane_order_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (key, bad, ct) = (
        dir.path().join("k"),
        dir.path().join("bad"),
        dir.path().join("c"),
    );
    let input = sample();
    omflip(&["keygen", "--in", &input, "--seed", "7", "--key", p(&key)]);
    omflip(&["encrypt", "--in", &input, "--key", p(&key), "--out", p(&ct)]);

    let mut bytes = std::fs::read(&key).unwrap();
    // plane order follows magic, version and the 8-byte master seed
    bytes[14] = bytes[15];
    std::fs::write(&bad, &bytes).unwrap();
    let res = omflip(&[
        "decrypt",
        "--in",
        p(&ct),
        "--key",
        p(&bad),
        "--out",
        p(&dir.path().join("o")),
    ]);
    assert_eq!(res.status.code(), Some(4));
    assert_eq!(String::from_utf8_lossy(&res.stderr).lines().count(), 1);
    assert!(!dir.path().join("o").exists());
}

#[test]
fn tampered_container_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (key, ct) = (dir.path().join("k"), dir.path().join("c"));
    let input = sample();
    omflip(&["keygen", "--in", &input, "--seed", "7", "--key", p(&key)]);
    omflip(&["encrypt", "--in", &input, "--key", p(&key), "--out", p(&ct)]);
    let mut bytes = std::fs::read(&ct).unwrap();
    bytes.truncate(bytes.len() - 1);
    std::fs::write(&ct, &bytes).unwrap();
    let res = omflip(&[
        "decrypt",
        "--in",
        p(&ct),
        "--key",
        p(&key),
        "--out",
        p(&dir.path().join("o")),
    ]);
    assert_eq!(res.status.code(), Some(4));
}

#[test]
fn analyze_emits_machine_lines() {
    let dir = tempfile::tempdir().unwrap();
    let (key, rep) = (dir.path().join("k"), dir.path().join("r.csv"));
    let input = sample();
    omflip(&["keygen", "--in", &input, "--seed", "3", "--key", p(&key)]);
    let res = omflip(&[
        "analyze",
        "--in",
        &input,
        "--key",
        p(&key),
        "--report",
        p(&rep),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let report = std::fs::read_to_string(&rep).unwrap();
    let count = |prefix: &str| report.lines().filter(|l| l.starts_with(prefix)).count();
    assert_eq!(count("entropy,"), 8);
    assert_eq!(count("correlation,"), 16);
    assert_eq!(count("key_sensitivity,"), 8);
    for line in report.lines() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4, "{line}");
        assert!(
            fields[3] == "undefined" || fields[3].parse::<f64>().is_ok(),
            "{line}"
        );
    }
    assert!(String::from_utf8_lossy(&res.stdout).contains(&report));
}

#[test]
fn selftest_passes() {
    let res = omflip(&["selftest"]);
    assert_eq!(res.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.lines().count() >= 5);
    assert!(stdout.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn exit_codes() {
    assert_eq!(omflip(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        omflip(&[
            "keygen",
            "--in",
            "/nonexistent.pgm",
            "--seed",
            "1",
            "--key",
            "/tmp/x"
        ])
        .status
        .code(),
        Some(3)
    );
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.pgm");
    std::fs::write(&junk, b"P2\n4 4\n255\n").unwrap();
    assert_eq!(
        omflip(&[
            "keygen",
            "--in",
            p(&junk),
            "--seed",
            "1",
            "--key",
            p(&dir.path().join("k"))
        ])
        .status
        .code(),
        Some(4)
    );
}

#[test]
fn key_file_roundtrips_through_library() {
    let dir = tempfile::tempdir().unwrap();
    let key = dir.path().join("k");
    omflip(&[
        "keygen",
        "--in",
        &sample(),
        "--seed",
        "99",
        "--key",
        p(&key),
    ]);
    let bytes = std::fs::read(&key).unwrap();
    assert_eq!(serialize_key(&parse_key(&bytes).unwrap()).unwrap(), bytes);
}
