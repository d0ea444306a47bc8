use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pslab"))
        .args(args)
        .env_remove(pslab::cli::OUT_ENV)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap()
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn gen_writes_the_window() {
    let o = pslab(&["gen", "--alpha", "3/2", "--limit", "31"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 11);
    let members: Vec<&str> = rows[1..].iter().map(|r| r.split(',').nth(1).unwrap()).collect();
    assert_eq!(members, ["1", "2", "5", "8", "11", "14", "18", "22", "27", "31"]);
}

#[test]
fn member_answers_plainly() {
    let o = pslab(&["member", "--alpha", "3/2", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "false");
    let o = pslab(&["member", "--alpha", "3/2", "--m", "31"]);
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn validation_errors_exit_2_with_json() {
    for args in [
        &["gen", "--alpha", "2", "--limit", "10"][..],
        &["gen", "--alpha", "1.5", "--limit", "10"],
        &["solve-linear", "--a", "1/2", "--b", "1/3", "--alpha", "3/2", "--limit", "10"],
        &["solve-system", "--system", "two", "--a", "1/4", "--theta", "1/5", "--budget", "10"],
    ] {
        let o = pslab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let e = error_json(&o);
        assert_eq!(e["exit_code"], 2);
        assert!(e["message"].as_str().is_some_and(|m| !m.is_empty()));
    }
}

#[test]
fn exhausted_precision_exits_3() {
    let o = pslab(&["--max-bits", "256", "cf", "--target", "sqrt3", "--terms", "300"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_json(&o)["exit_code"], 3);
}

#[test]
fn out_dir_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_pslab"))
        .args(["xyz", "--alpha", "3/2", "--limit", "1000"])
        .env(pslab::cli::OUT_ENV, tmp.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let csv = fs::read_to_string(tmp.path().join("xyz.csv")).unwrap();
    assert!(csv.lines().count() > 1);
}

#[test]
fn config_file_overrides_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.json");
    fs::write(&cfg, r#"{"command": "gen", "alpha": "5/2", "limit": 5}"#).unwrap();
    let o = pslab(&["--config", cfg.to_str().unwrap(), "--alpha", "3/2", "--limit", "31"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn worker_count_does_not_change_files() {
    let tmp = tempfile::tempdir().unwrap();
    let mut seen = Vec::new();
    for w in ["1", "8", "8"] {
        let dir = tmp.path().join(format!("w{w}-{}", seen.len()));
        fs::create_dir(&dir).unwrap();
        let d = dir.to_str().unwrap();
        for args in [
            &["solve-system", "--system", "one", "--a", "2", "--i-hi", "1/2", "--alpha", "3/2", "--budget", "1e5"][..],
            &["equidist", "--a", "1/4", "--eta1", "0.3", "--eta2", "0.45", "--n", "1000,5000", "--band-n", "10,100"],
            &["measure", "--kind", "bc", "--a", "1/4", "--i-hi", "1/2", "--theta1", "0.3", "--theta2", "0.4", "--limit", "200"],
        ] {
            let mut full = vec!["--out", d, "--workers", w];
            full.extend_from_slice(args);
            assert!(pslab(&full).status.success(), "{full:?}");
        }
        seen.push(dir_bytes(&dir));
    }
    assert!(seen[0].len() >= 6);
    assert_eq!(seen[0], seen[1]);
    assert_eq!(seen[1], seen[2]);
}

#[test]
fn fs3_prints_a_witness() {
    let o = pslab(&["fs3", "--alpha", "3/2", "--bound", "1000"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["witness"]["x"], 11);
    assert_eq!(v["witness"]["z"], 374);
}
