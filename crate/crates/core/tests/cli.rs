use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_seqalloc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or_default()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: Option<&[u8]>) -> Vec<u8> {
    let out = run(args, stdin);
    assert!(
        out.status.success(),
        "seqalloc {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

const EXAMPLE: &str = r#"{
  "items": ["i1", "i2", "i3", "i4"],
  "agents": ["a1", "a2", "a3"],
  "sequence": [0, 1, 2, 0],
  "profile": [[0, 1, 2, 3], [2, 3, 0, 1], [0, 1, 2, 3]],
  "utilities": [5, 4, 3, 1]
}"#;

fn write(dir: &Path, name: &str, text: &[u8]) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn solve_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ex.json", EXAMPLE.as_bytes());
    let v = json(&ok(&["solve", "--algo", "dp", path.to_str().unwrap()], None));
    assert_eq!(v["optimal_utility"], 7);
    assert_eq!(v["truthful_utility"], 6);
    assert_eq!(v["algorithm"], "dp");
    assert_eq!(v["bundle"], serde_json::json!(["i2", "i3"]));
    assert_eq!(v["ranking"][0], "i3");
    assert!(v["stats"].get("elapsed_ms").is_none());
    let timed = json(&ok(&["solve", "--timings", path.to_str().unwrap()], None));
    assert!(timed["stats"]["elapsed_ms"].is_number());
}

#[test]
fn dp_and_brute_agree_on_seeded_instance() {
    let inst = ok(&["generate", "--type", "random", "--seed", "42", "-n", "3", "-m", "7"], None);
    let dp = json(&ok(&["solve", "--algo", "dp"], Some(&inst)));
    let brute = json(&ok(&["solve", "--algo", "brute"], Some(&inst)));
    assert_eq!(dp["optimal_utility"], brute["optimal_utility"]);
    assert_eq!(brute["algorithm"], "brute");
}

#[test]
fn tight_family_through_check() {
    let inst = ok(&["generate", "--type", "tight", "--scale", "1000"], None);
    let v = json(&ok(&["check"], Some(&inst)));
    assert_eq!(v["bound_ok"], true);
    assert_eq!(v["ratio"], "1997/1000");
    assert_eq!(v["ratio_status"], "holds");
}

#[test]
fn simulate_reported_ranking() {
    let v = json(&ok(&["simulate", "--ranking", "i3,i2"], Some(EXAMPLE.as_bytes())));
    assert_eq!(v["manipulator_utility"], 7);
    assert_eq!(v["bundles"][0]["items"], serde_json::json!(["i2", "i3"]));
    assert_eq!(v["picks"][0]["item"], "i3");
    let truthful = json(&ok(&["simulate"], Some(EXAMPLE.as_bytes())));
    assert_eq!(truthful["manipulator_utility"], 6);
}

#[test]
fn generated_instances_feed_every_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "g.txt", b"4 4\n1 2\n2 3\n1 3\n3 4\ncolor 1 1\ncolor 2 2\ncolor 3 1\ncolor 4 2\n");
    let g = graph.to_str().unwrap();
    let meta = dir.path().join("meta.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["--type", "random", "-n", "3", "-m", "6", "--mu", "2"],
        vec!["--type", "correlated", "-n", "4", "-m", "7", "--target-rg", "2"],
        vec!["--type", "tight", "--scale", "10"],
        vec!["--type", "clique", "--graph", g, "-k", "2"],
    ];
    for case in cases {
        let mut args = vec!["generate", "--meta", meta.to_str().unwrap()];
        args.extend(case.iter().copied());
        let inst = ok(&args, None);
        assert!(json(&std::fs::read(&meta).unwrap()).is_object());
        let v = json(&ok(&["solve"], Some(&inst)));
        let sub = json(&ok(&["solve", "--algo", "subset"], Some(&inst)));
        assert_eq!(v["optimal_utility"], sub["optimal_utility"], "{case:?}");
        ok(&["simulate"], Some(&inst));
        assert!(String::from_utf8(ok(&["export-ilp"], Some(&inst))).unwrap().ends_with("End\n"));
        let check = run(&["check"], Some(&inst));
        assert!(matches!(check.status.code(), Some(0 | 6)), "{case:?}");
        assert!(json(&check.stdout)["bound_ok"].as_bool().unwrap());
    }
    let mcc = ok(&["generate", "--type", "mcc", "--graph", g, "-k", "2", "--meta", meta.to_str().unwrap()], None);
    assert_eq!(json(&mcc)["agents"].as_array().unwrap().len(), 8);
    assert_eq!(json(&std::fs::read(&meta).unwrap())["metadata"]["k"], 2);
    ok(&["simulate"], Some(&mcc));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(run(&["solve", "--nope"], None).status.code(), Some(2));
    assert_eq!(run(&["solve", "/does/not/exist.json"], None).status.code(), Some(3));
    assert_eq!(run(&["solve"], Some(b"{\"items\": 3}")).status.code(), Some(4));
    let bad_perm = EXAMPLE.replace("[2, 3, 0, 1]", "[2, 2, 0, 1]");
    assert_eq!(run(&["solve"], Some(bad_perm.as_bytes())).status.code(), Some(4));
    let big = ok(&["generate", "--type", "random", "-n", "2", "-m", "10"], None);
    assert_eq!(run(&["solve", "--algo", "brute"], Some(&big)).status.code(), Some(5));
    assert_eq!(run(&["solve", "--max-states", "2"], Some(EXAMPLE.as_bytes())).status.code(), Some(5));
    // n = 2 with the manipulator picking first: the full item set is reached,
    // one more set than the first state-count bound allows.
    let two = r#"{"items":["x","y"],"agents":["a1","a2"],"sequence":[0,1],"profile":[[0,1],[0,1]],"utilities":[2,1]}"#;
    let out = run(&["check"], Some(two.as_bytes()));
    assert_eq!(out.status.code(), Some(6));
    assert_eq!(json(&out.stdout)["state_bounds_ok"], false);
}

#[test]
fn output_file_and_lp_text() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("ex.lp");
    let out = ok(&["export-ilp", "--out", lp.to_str().unwrap()], Some(EXAMPLE.as_bytes()));
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&lp).unwrap();
    assert!(text.contains("greedy_3_2: x_3_2 + x_3_1 >= 1\n"));
}

#[test]
fn bench_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.json",
        br#"{"agents":[2,3],"items":[5],"seeds":[1,2,3],"oracle":"subset"}"#,
    );
    let csv = String::from_utf8(ok(&["bench", cfg.to_str().unwrap()], None)).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("n,m,mu_target,rg_target,seed"));
    assert_eq!(lines.count(), 6);
    let bad = write(dir.path(), "bad.json", br#"{"agents":[2],"items":[5],"seeds":[1],"colour":1}"#);
    assert_eq!(run(&["bench", bad.to_str().unwrap()], None).status.code(), Some(4));
}
