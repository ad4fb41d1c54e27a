use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esakia-kit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("esakia-kit-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_abomination_dot() {
    let o = kit(&[
        "gen-abomination",
        "--n",
        "2",
        "--depth",
        "1",
        "--format",
        "dot",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("digraph poset {"));
    assert!(out.contains("label=\"c0_7\""));
}

#[test]
fn gen_ladder_json_round_trips_through_convert() {
    let o = kit(&["gen-ladder", "--n", "1", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let file = scratch("ladder.json", &stdout(&o));
    let csv = kit(&["convert", "--input", path(&file), "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(0));
    // 4 indices, each covered by 3 elements on each of two lower levels.
    assert_eq!(stdout(&csv).lines().count(), 1 + 2 * 4 * 3);
    let json = kit(&["convert", "--input", path(&file), "--format", "json"]);
    assert_eq!(stdout(&json), stdout(&o));
}

#[test]
fn canonical_coloring_is_strict() {
    let p = scratch(
        "x2.json",
        &stdout(&kit(&["gen-abomination", "--n", "2", "--depth", "0"])),
    );
    let c = scratch(
        "x2c.json",
        &stdout(&kit(&[
            "gen-abomination",
            "--n",
            "2",
            "--depth",
            "0",
            "--canonical-coloring",
        ])),
    );
    let o = kit(&[
        "check-coloring",
        "--poset",
        path(&p),
        "--coloring",
        path(&c),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"strict\":true"));
}

#[test]
fn non_weak_coloring_is_a_usage_error() {
    let p = scratch("chain.json", r#"{"n":2,"covers":[[0,1]]}"#);
    let c = scratch("bad.json", r#"{"n":1,"colors":{"0":"1","1":"0"}}"#);
    let o = kit(&[
        "check-coloring",
        "--poset",
        path(&p),
        "--coloring",
        path(&c),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a weak coloring"));
}

#[test]
fn colorability_search_and_budget() {
    let p = scratch("anti.json", r#"{"n":3,"covers":[]}"#);
    let o = kit(&["check-coloring", "--poset", path(&p), "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"colorable\":false"));
    let o = kit(&["check-coloring", "--poset", path(&p), "--n", "2"]);
    assert!(stdout(&o).contains("\"colorable\":true"));

    let x = scratch(
        "x2b.json",
        &stdout(&kit(&["gen-abomination", "--n", "2", "--depth", "1"])),
    );
    let o = kit(&[
        "check-coloring",
        "--poset",
        path(&x),
        "--n",
        "3",
        "--budget",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reduce_reports_kernel_and_steps() {
    let p = scratch("vee.json", r#"{"n":3,"covers":[[0,1],[0,2]]}"#);
    let c = scratch("zero.json", r#"{"n":1,"colors":{"0":"0","1":"0","2":"0"}}"#);
    let o = kit(&["reduce", "--poset", path(&p), "--coloring", path(&c)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kernel"]["blocks"], serde_json::json!([[0, 1, 2]]));
    assert_eq!(v["steps"].as_array().unwrap().len(), 2);
    assert_eq!(v["quotient"]["n"], 1);
}

#[test]
fn census_is_seeded() {
    let x = scratch(
        "x2s.json",
        &stdout(&kit(&["gen-abomination", "--n", "2", "--depth", "0"])),
    );
    let args = [
        "census",
        "--poset",
        path(&x),
        "--n",
        "2",
        "--samples",
        "50",
        "--seed",
        "7",
    ];
    let (a, b) = (kit(&args), kit(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["search"]["seed"], 7);
    assert_eq!(v["partial"], true);
}

#[test]
fn kc_probe_maximum() {
    let o = kit(&["kc-probe", "--max-size", "5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["maximum"], 3);
}

#[test]
fn usage_errors() {
    assert_eq!(kit(&["verify", "--suite", "other"]).status.code(), Some(2));
    assert_eq!(kit(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        kit(&["gen-ladder", "--n", "1", "--depth", "1", "--format", "text"])
            .status
            .code(),
        Some(2)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_esakia-kit"))
        .args(["kc-probe"])
        .env("ESAKIA_KIT_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_cap_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_esakia-kit"))
            .args(["kc-probe", "--max-size", "6"])
            .env("ESAKIA_KIT_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}
