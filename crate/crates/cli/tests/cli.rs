use std::process::{Command, Output};

use serde_json::Value;

fn jack_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jack-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn g_prints_delta_coefficients() {
    let o = jack_lab(&["g", "--pi", "3", "--sigma", "2"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["[3]"], serde_json::json!(["0", "6"]));
    assert_eq!(v["[3,2]"], serde_json::json!(["1"]));
    assert_eq!(v.as_object().unwrap().len(), 4);
}

#[test]
fn handshake_csv_has_the_decomposition() {
    let o = jack_lab(&["handshake", "--pi", "3,2", "--sigma", "3,3", "--mu", "3,3", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "count,constant,z_ratio,oriented_lists,product\n72,1,6,12,72\n");
}

#[test]
fn eta_prints_the_class_trace() {
    let o = jack_lab(&["eta", "--lambda", "2", "--delta", "[[1,2],[1^,2^]]"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["eta"], 1);
    assert_eq!(v["components"][0]["trace"], serde_json::json!(["twisted", "bridge"]));
}

#[test]
fn c_table_as_csv() {
    let o = jack_lab(&["c", "--n", "2", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "[2],[2],[2],0 1"));
}

#[test]
fn pretty_tables_align() {
    let o = jack_lab(&["embed", "--pi", "3,1", "--lambda", "4,3", "--format", "pretty"]);
    assert_eq!(stdout(&o), "a_top_ch  embeddings  hat_p\n120       120         120\n");
}

#[test]
fn verify_is_reproducible_and_exits_cleanly() {
    let a = jack_lab(&["verify", "--suite", "specializations", "--n", "2"]);
    let b = jack_lab(&["verify", "--suite", "specializations", "--n", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    for line in stdout(&a).lines() {
        let r: Value = serde_json::from_str(line).unwrap();
        assert_ne!(r["status"], "failed");
        assert!(r.get("wall_time_ms").is_none());
    }
}

#[test]
fn verify_fails_on_known_false_statement() {
    let o = jack_lab(&["verify", "--suite", "g-top", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let failed: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .filter(|r| r["status"] == "failed")
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["statement"], "handshake.nonempty-iff-subpartitions");
    assert!(failed[0]["counterexample"].is_object());
}

#[test]
fn usage_errors() {
    assert_eq!(jack_lab(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(jack_lab(&["jack", "--n", "9"]).status.code(), Some(2));
    assert_eq!(jack_lab(&["g", "--pi", "2,3", "--sigma", "1"]).status.code(), Some(2));
}
