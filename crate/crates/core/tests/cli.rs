use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_htforget"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn models() {
    let out = run(&["models", &data("ex2.lp"), "--kind", "as"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{a,p} {b}\n");

    let out = run(&["models", &data("ex2.lp"), "--kind", "ht"]);
    assert_eq!(
        stdout(&out),
        "<{b},{b}> <{b},{a,b}> <{a,b},{a,b}> <{a,p},{a,p}> <{a,p},{a,b,p}> <{a,b,p},{a,b,p}>\n"
    );

    let out = run(&["models", &data("empty.lp"), "--kind", "as", "--sig", "a"]);
    assert_eq!(stdout(&out), "{}\n");

    assert_eq!(run(&["models", &data("ex2.lp"), "--kind", "vht"]).status.code(), Some(2));
}

#[test]
fn models_json() {
    let out = run(&["models", &data("ex2.lp"), "--kind", "as", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["answer_sets"], serde_json::json!([["a", "p"], ["b"]]));
}

#[test]
fn forget() {
    let out = run(&["forget", &data("ex4.lp"), "--forget", "p", "--op", "sp", "--minimize"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "a :- not not a.\n");

    let out = run(&["forget", &data("ex4.lp"), "--forget", "p", "--op", "r", "--minimize"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "");

    let out = run(&["forget", &data("ex1.lp"), "--forget", "d", "--op", "m", "--minimize"]);
    assert_eq!(stdout(&out), "a :- not b.\nb :- not c.\ne :- a.\n");

    let out = run(&["closure", &data("ex2.lp"), "--forget", "p", "--minimize"]);
    assert_eq!(stdout(&out), "a | b.\n");
}

#[test]
fn forget_flag_errors() {
    assert_eq!(run(&["forget", &data("ex4.lp"), "--forget", ""]).status.code(), Some(2));
    assert_eq!(run(&["forget", &data("ex4.lp"), "--forget", "p", "--op", "x"]).status.code(), Some(2));
    assert_eq!(run(&["forget", &data("missing.lp"), "--forget", "p"]).status.code(), Some(2));
}

#[test]
fn closure_cap_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("six.lp");
    std::fs::write(&path, "a :- b. c :- d. e :- f.\n").unwrap();
    let out = run(&["forget", path.to_str().unwrap(), "--forget", "f", "--op", "closure"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn max_atoms_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_htforget"))
        .args(["models", &data("ex2.lp")])
        .env("HTFORGET_MAX_ATOMS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap is 2"));
}

#[test]
fn omega() {
    let out = run(&["omega", &data("ex2.lp"), "--forget", "p"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout(&out), "omega: true, witness Y={a,b}\n");

    let out = run(&["omega", &data("ex4.lp"), "--forget", "p"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "omega: false\n");

    let out = run(&["omega", &data("ex2.lp"), "--forget", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "omega: false\n");

    let out = run(&["omega", &data("ex2.lp"), "--forget", "p", "--explain"]);
    assert!(stdout(&out).contains("Y={a,b}: {{a},{a,b}} {{b},{a,b}} (no least element)"));
}

#[test]
fn equiv() {
    let dir = tempfile::tempdir().unwrap();
    let result = dir.path().join("result.lp");
    let out = run(&["forget", &data("ex4.lp"), "--forget", "p", "--op", "sp"]);
    std::fs::write(&result, &out.stdout).unwrap();
    let choice = dir.path().join("choice.lp");
    std::fs::write(&choice, "a :- not not a.\n").unwrap();
    let out = run(&["equiv", result.to_str().unwrap(), choice.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["equiv", &data("ex2.lp"), &data("ex4.lp"), "--mode", "strong"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("not equivalent: <"));

    let out = run(&["equiv", &data("ex5.lp"), &data("ex5.lp")]);
    assert_eq!(out.status.code(), Some(0));

    assert_eq!(
        run(&["equiv", &data("ex2.lp"), &data("ex4.lp"), "--mode", "relativized"]).status.code(),
        Some(2)
    );
}

#[test]
fn equiv_relativized() {
    // contexts avoiding b and c can never make either true
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.lp");
    let q = dir.path().join("q.lp");
    std::fs::write(&p, "a :- not b.\n").unwrap();
    std::fs::write(&q, "a :- not c.\n").unwrap();
    let (p, q) = (p.to_str().unwrap(), q.to_str().unwrap());
    let out = run(&["equiv", p, q, "--mode", "relativized", "--forget", "b,c"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = run(&["equiv", p, q, "--mode", "relativized", "--forget", "b"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["equiv", p, q]).status.code(), Some(1));
}

#[test]
fn check_golden_corpus() {
    let witnesses = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/witnesses");
    let out = run(&["check", "--props", "sC", "--ops", "sp", "--corpus", witnesses.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(value["matrix"]["sC"]["sp"]["violations"].as_u64().unwrap() >= 1);
}

#[test]
fn check_bound_zero_sp_is_cp() {
    let base = ["check", "--size", "60", "--bound", "0", "--no-golden", "--props"];
    let sp = run(&[&base[..], &["SP"]].concat());
    let cp = run(&[&base[..], &["CP"]].concat());
    let sp: serde_json::Value = serde_json::from_slice(&sp.stdout).unwrap();
    let cp: serde_json::Value = serde_json::from_slice(&cp.stdout).unwrap();
    for op in ["sp", "r", "m"] {
        assert_eq!(sp["matrix"]["SP"][op]["violations"], cp["matrix"]["CP"][op]["violations"]);
    }
}

#[test]
fn check_writes_witnesses_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("w");
    let args = ["check", "--size", "40", "--props", "sC,W", "--ops", "sp", "--out", out_dir.to_str().unwrap()];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, run(&args).stdout);
    for name in ["sc-sp", "w-sp"] {
        let w = htforget::properties::read_witness(&out_dir.join(name)).unwrap();
        assert!(htforget::properties::replay(&w).unwrap());
    }
}

#[test]
fn check_bad_names() {
    assert_eq!(run(&["check", "--props", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--ops", "closure"]).status.code(), Some(2));
}

#[test]
fn synth() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let out = run(&["models", &data("ex4.lp"), "--format", "json"]);
    std::fs::write(&path, &out.stdout).unwrap();
    let out = run(&["synth", path.to_str().unwrap(), "--minimize"]);
    assert_eq!(out.status.code(), Some(0));
    let synthesized = dir.path().join("s.lp");
    std::fs::write(&synthesized, &out.stdout).unwrap();
    let out = run(&["equiv", synthesized.to_str().unwrap(), &data("ex4.lp")]);
    assert_eq!(out.status.code(), Some(0));
}
