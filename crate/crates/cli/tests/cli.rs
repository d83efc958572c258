use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn reesjump(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reesjump")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is a JSON report")
}

fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(rel)
}

fn write_task(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn example15_passes() {
    let o = reesjump(&["check:example15"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    assert_eq!(v["version"], 1);
}

#[test]
fn bundled_corpus_passes() {
    let o = reesjump(&["check:all", "--no-timing"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(json(&o)["checks"].as_array().unwrap().len() > 40);
}

#[test]
fn koszul_ext_table() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_task(&dir, "koszul.task", "ring QQ[x, y]\nmodule K = quotient (x, y)\nmodule A = free [0]\n");
    let o = reesjump(&["ext", "--q", "2", "K", "A", "--window", "-5:5", "--input", &f]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["checks"][0]["evidence"]["dims"], serde_json::json!({ "-2": 1 }));
    let o = reesjump(&["ext", "--q", "1", "K", "A", "--window=-5:5", "--input", &f]);
    assert_eq!(json(&o)["checks"][0]["evidence"]["dims"], serde_json::json!({}));
}

#[test]
fn syntax_error_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_task(&dir, "bad.task", "ring QQ[x]\nmodule M = quotient (x^)\n");
    let o = reesjump(&["gb", "M", "--input", &f]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.task:2:24:"), "{err}");
}

#[test]
fn corrupted_matrix_single_file_and_directory() {
    let f = corpus("negative/corrupted.task");
    let o = reesjump(&["check:all", "--input", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("entry (0, 0)"));

    let o = reesjump(&["check:all", "--input", corpus("negative").to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "fail"));
    let parse = checks.iter().find(|c| c["name"] == "parse:corrupted").unwrap();
    assert!(parse["evidence"]["error"].as_str().unwrap().contains("(0, 0)"));
}

#[test]
fn swap_control_fails() {
    let o = reesjump(&["check:example15", "--input", corpus("negative/swap.task").to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["checks"][0]["status"], "fail");
    assert_eq!(v["checks"][0]["evidence"]["counterexample"]["instance"], "k[t]");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["frobnicate"],
        vec!["check:all", "--max-q", "9"],
        vec!["check:all", "--window", "3:2"],
        vec!["check:all", "--format", "xml"],
        vec!["check:all", "--field", "Fp=4"],
        vec!["check:all", "--bogus"],
        vec!["ext", "M", "N"],
        vec!["gb", "M"],
        vec!["check:all", "--input", "/nonexistent/file.task"],
    ] {
        assert_eq!(code(&reesjump(&args)), 2, "{args:?}");
    }
}

#[test]
fn command_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_task(&dir, "plain.task", "ring QQ[x]\nmodule M = quotient (x)\n");
    assert_eq!(code(&reesjump(&["check:lemma1", "--input", &f])), 2);
    assert_eq!(code(&reesjump(&["sp0", "M", "--input", &f])), 2);
    assert_eq!(code(&reesjump(&["gb", "Missing", "--input", &f])), 2);
}

#[test]
fn empty_corpus_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = reesjump(&["check:all", "--input", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "{\"version\":1,\"checks\":[]}\n");
}

#[test]
fn reports_are_byte_deterministic() {
    let a = reesjump(&["check:all", "--no-timing"]);
    let b = reesjump(&["check:all", "--no-timing"]);
    assert_eq!(a.stdout, b.stdout);
    let a = reesjump(&["check:jump", "--no-timing", "--format", "text"]);
    let b = reesjump(&["check:jump", "--no-timing", "--format", "text"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).contains("PASS  jump:kt:J"));
}

#[test]
fn computation_commands() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_task(
        &dir,
        "c.task",
        "ring QQ[x]\nmodule S = quotient (x^2)\nmodule P ungraded = quotient (x^2 - 1)\nrmodule Q = quotient (T)\nrmodule Pt = rees P filtration [0]\n",
    );
    let run = |args: &[&str]| {
        let mut all = args.to_vec();
        all.extend(["--input", &f, "--window", "-3:3"]);
        let o = reesjump(&all);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        json(&o)["checks"][0]["evidence"].clone()
    };
    assert_eq!(run(&["gb", "S"])["hilbert"], serde_json::json!({ "0": 1, "1": 1 }));
    assert_eq!(run(&["resolve", "S"])["length"], 1);
    assert_eq!(run(&["rees", "P"])["kind"], "good-filtration");
    assert_eq!(run(&["sp1", "Pt"])["dimension"], 2);
    assert_eq!(run(&["sp0", "Pt"])["hilbert"], serde_json::json!({ "0": 1, "1": 1 }));
    let l = run(&["lsp0", "Q"]);
    assert_eq!(l["t_regular"], false);
    assert_eq!(l["-1"], serde_json::json!({ "1": 1, "2": 1, "3": 1 }));
}

#[test]
fn fuzzed_corpus_never_exits_3() {
    for seed in 0..3 {
        let s = seed.to_string();
        let o = reesjump(&["check:all", "--seed", &s, "--no-timing"]);
        assert!(matches!(code(&o), 0 | 1), "seed {seed}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn help_exits_0() {
    assert_eq!(code(&reesjump(&["--help"])), 0);
}
