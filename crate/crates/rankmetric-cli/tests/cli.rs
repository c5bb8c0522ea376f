//! End-to-end tests driving the compiled binary through files and pipes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use std::io::Write;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rankmetric")
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(bin());
    cmd.args(args).stdout(Stdio::piped()).stderr(Stdio::piped());
    if stdin.is_some() {
        cmd.stdin(Stdio::piped());
    } else {
        cmd.stdin(Stdio::null());
    }
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .expect("stdin piped")
            .write_all(text.as_bytes())
            .expect("stdin accepts input");
    }
    child.wait_with_output().expect("binary finishes")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stdout: {} stderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn setup_plain(dir: &Path) -> PathBuf {
    let path = dir.join("gg.json");
    let out = run(
        &[
            "setup", "--p", "2", "--n", "6", "--k", "3", "--family", "GG", "--model", "A",
            "--seed", "7", "--out", path.to_str().unwrap(),
        ],
        None,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn round_trip_beyond_half_distance() {
    let dir = tempfile::tempdir().unwrap();
    let params = setup_plain(dir.path());
    let p = params.to_str().unwrap();

    let message = r#"["010000000000","000001000000","010100000000"]"#;
    let enc = run(&["encode", "--params", p], Some(message));
    let codeword = stdout_json(&enc);
    assert_eq!(codeword.as_array().unwrap().len(), 6);

    let cor = run(
        &["corrupt", "--params", p, "--t", "2"],
        Some(&codeword.to_string()),
    );
    let corrupted = stdout_json(&cor);
    assert_eq!(corrupted["error"]["rank"], 2);

    let dec = run(&["decode", "--params", p], Some(&corrupted.to_string()));
    let decoded = stdout_json(&dec);
    assert_eq!(decoded["status"], "ok");
    assert_eq!(decoded["branch"], "case2");
    let echoed: serde_json::Value = serde_json::from_str(message).unwrap();
    assert_eq!(decoded["message"], echoed);
}

#[test]
fn decode_accepts_bare_array_and_reports_failure() {
    let dir = tempfile::tempdir().unwrap();
    let params = setup_plain(dir.path());
    let p = params.to_str().unwrap();

    // rank-3 corruption exceeds even the constrained radius: decode runs
    // but reports, exit code 2
    let message = r#"["010000000000","000001000000","010100000000"]"#;
    let enc = run(&["encode", "--params", p], Some(message));
    let codeword = stdout_json(&enc);
    let cor = run(
        &["corrupt", "--params", p, "--t", "3", "--unconstrained", "--seed", "1"],
        Some(&codeword.to_string()),
    );
    let corrupted = stdout_json(&cor);

    // feed the received word as a bare array, not the wrapping object
    let bare = corrupted["received"].to_string();
    let out = run(&["decode", "--params", p], Some(&bare));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(2), "status should signal no unique decode");
    assert!(body["status"] == "failure" || body["status"] == "ambiguous");
}

#[test]
fn simulate_is_deterministic_and_csv_projects() {
    let dir = tempfile::tempdir().unwrap();
    let params = setup_plain(dir.path());
    let p = params.to_str().unwrap();

    let a = run(&["simulate", "--params", p, "--trials", "20", "--t", "2"], None);
    let b = run(
        &["simulate", "--params", p, "--trials", "20", "--t", "2", "--sequential"],
        None,
    );
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout, "parallel and sequential runs must agree");
    let stats = stdout_json(&a);
    assert_eq!(stats["trials"], 20);
    assert_eq!(
        stats["successes"].as_u64().unwrap() + stats["ambiguous_with_truth"].as_u64().unwrap(),
        20
    );

    let csv = run(
        &["simulate", "--params", p, "--trials", "20", "--t", "2", "--format", "csv"],
        None,
    );
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("trials,successes,"));
    assert!(lines.next().unwrap().starts_with("20,"));
}

#[test]
fn symmetric_model_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gtgb.json");
    let out = run(
        &[
            "setup", "--p", "2", "--l", "2", "--n", "7", "--k", "3", "--family", "GTG",
            "--h", "1", "--model", "B", "--seed", "11", "--out", path.to_str().unwrap(),
        ],
        None,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let p = path.to_str().unwrap();

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["model"]["type"], "B");
    assert_eq!(doc["family"], "GTG");

    // elements of F_{4^7} carry 14 base-field coordinates, two hex
    // characters each
    let message = r#"["0100000000000000000000000000","0001000000000000000000000000","0000000100000000000000000000"]"#;
    let enc = run(&["encode", "--params", p], Some(message));
    let codeword = stdout_json(&enc);

    let cor = run(&["corrupt", "--params", p], Some(&codeword.to_string()));
    let corrupted = stdout_json(&cor);
    assert!(corrupted["error"]["rank"].as_u64().unwrap() >= 1);

    let dec = run(&["decode", "--params", p], Some(&corrupted.to_string()));
    let decoded = stdout_json(&dec);
    assert_eq!(decoded["status"], "ok");
    assert_eq!(decoded["branch"], "model-b-direct");
    let echoed: serde_json::Value = serde_json::from_str(message).unwrap();
    assert_eq!(decoded["message"], echoed);
}

#[test]
fn setup_rejects_bad_parameters() {
    // odd n under model A
    let out = run(
        &["setup", "--p", "3", "--n", "5", "--k", "2", "--family", "GG", "--model", "A"],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even n"));

    // twisted family without --h
    let out = run(
        &["setup", "--p", "2", "--l", "2", "--n", "6", "--k", "2", "--family", "GTG",
          "--model", "A"],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--h"));

    // twist scalar that no exponent admits over q = 2
    let out = run(
        &["setup", "--p", "2", "--n", "8", "--k", "2", "--family", "GTG", "--h", "1",
          "--model", "A"],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unconstrained_corrupt_decodes_classically() {
    let dir = tempfile::tempdir().unwrap();
    let params = setup_plain(dir.path());
    let p = params.to_str().unwrap();

    let message = r#"["000001000000","010100000000","000000000001"]"#;
    let enc = run(&["encode", "--params", p], Some(message));
    let codeword = stdout_json(&enc);

    let cor = run(
        &["corrupt", "--params", p, "--t", "1", "--unconstrained"],
        Some(&codeword.to_string()),
    );
    let corrupted = stdout_json(&cor);
    assert_eq!(corrupted["error"]["rank"], 1);

    let dec = run(
        &["decode", "--params", p, "--no-constraints"],
        Some(&corrupted.to_string()),
    );
    let decoded = stdout_json(&dec);
    assert_eq!(decoded["status"], "ok");
    assert_eq!(decoded["branch"], "case1");
    let echoed: serde_json::Value = serde_json::from_str(message).unwrap();
    assert_eq!(decoded["message"], echoed);
}
