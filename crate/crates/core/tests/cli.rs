use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_morphcat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str], stdin: &str) -> (i32, Value) {
    let (code, out) = run(args, stdin);
    (code, serde_json::from_str(&out).unwrap_or(Value::Null))
}

#[test]
fn endo_example() {
    let (code, v) = json(&["endo"], r#"{"ring":"F_5","object":{"mu":[[1,0],[0,0]]}}"#);
    assert_eq!(code, 0);
    assert_eq!(v["dim"], 5);
    assert_eq!(v["radical_dim"], 2);
    assert_eq!(v["type"], 3);
    assert_eq!(v["is_local"], false);
}

#[test]
fn decompose_identity() {
    let (code, v) = json(&["decompose"], r#"{"ring":"F_2","object":{"mu":[[1,0,0],[0,1,0],[0,0,1]]}}"#);
    assert_eq!(code, 0);
    assert_eq!((v["a"].as_u64(), v["b"].as_u64(), v["c"].as_u64()), (Some(0), Some(0), Some(3)));
}

const SHUFFLED: &str = r#"{"ring":"Z/8",
  "left":[{"m0":{"divisors":[2]},"m1":{"divisors":[2]},"mu":[["0"]]},{"m0":{"divisors":[2]},"m1":{"divisors":[4]},"mu":[["0"]]}],
  "right":[{"m0":{"divisors":[2]},"m1":{"divisors":[4]},"mu":[["0"]]},{"m0":{"divisors":[2]},"m1":{"divisors":[2]},"mu":[["0"]]}]}"#;

#[test]
fn match_shuffled_list() {
    let (code, v) = json(&["match"], SHUFFLED);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "isomorphic");
    assert_eq!(v["permutations"]["c"], serde_json::json!([1, 0]));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("job.json");
    std::fs::write(&input, SHUFFLED).unwrap();
    let mut outputs = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.path().join(name);
        let args = ["match", "--input", input.to_str().unwrap(), "--output", out.to_str().unwrap(), "--seed", "7"];
        assert_eq!(run(&args, "").0, 0);
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(std::fs::read_dir(dir.path()).unwrap().all(|e| !e.unwrap().file_name().to_string_lossy().ends_with(".tmp")));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["endo"], "not json").0, 2);
    assert_eq!(run(&["endo"], r#"{"ring":"nope","object":{"mu":[[1]]}}"#).0, 2);
    assert_eq!(run(&["decompose"], r#"{"ring":"Z/4","object":{"mu":[[1]]}}"#).0, 2);
    assert_eq!(run(&["frobnicate"], "").0, 2);
    assert_eq!(run(&["--help"], "").0, 0);
    let (code, v) = json(&["equiv-diag"], r#"{"ring":"Z/8","a":[2,4],"b":[2,2]}"#);
    assert_eq!((code, v["equivalent"].as_bool()), (1, Some(false)));
    let (code, _) = json(&["classes"], r#"{"ring":"F_2","left":{"mu":[[1]]},"right":{"mu":[[0]]}}"#);
    assert_eq!(code, 1);
    let not_iso = r#"{"ring":"F_2","left":[{"mu":[[1]]}],"right":[{"mu":[[0]]}]}"#;
    let (code, v) = json(&["match"], not_iso);
    assert_eq!((code, v["verdict"].as_str()), (1, Some("not")));
}

#[test]
fn verify_and_oracle() {
    let (code, v) = json(&["verify"], r#"{"ring":"Z/4","object":{"m0":{"divisors":[4]},"m1":{"divisors":[2]},"mu":[["1"]]}}"#);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["locality"]["is_local"], true);
    let (code, v) = json(&["oracle", "--seed", "3"], r#"{"ring":"F_2","pairs":100}"#);
    assert_eq!(code, 0);
    assert_eq!(v["iso_mismatches"], 0);
    assert_eq!(v["pairs_checked"], 100);
}

#[test]
fn text_format() {
    let (code, out) = run(&["decompose", "--format", "text"], r#"{"ring":"Q","object":{"mu":[[1,2],[2,4]]}}"#);
    assert_eq!(code, 0);
    assert!(out.contains("a: 1") && out.contains("c: 1"));
}
