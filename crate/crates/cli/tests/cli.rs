use std::path::PathBuf;
use std::process::{Command, Output};

use permkit_core::{GroupInput, Permutation, StabilizerChain};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn permkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permkit"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn order_of_s4() {
    let o = permkit(&["order", "--group", &fixture("s4.grp")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("24"));
}

#[test]
fn k_move_json_document() {
    let o = permkit(&["k-move", "--group", &fixture("c3xc2.grp"), "--k", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["answer"], "yes");
    assert_eq!(v["witness"], "(1 2 3)(4 5)");
    assert_eq!(v["moved"], 5);
    assert_eq!(v["command"], "k-move");
    assert_eq!(v["input-digest"].as_str().unwrap().len(), 64);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["answer", "witness", "moved", "command", "input-digest"]);
}

#[test]
fn negative_answers_exit_one() {
    let o = permkit(&["k-base-cyclic", "--group", &fixture("c3xc2.grp"), "--k", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "no\n");
    let o = permkit(&["k-move", "--group", &fixture("klein4.grp"), "--k", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = permkit(&["fpf-coset", "--group", &fixture("c2_on3.grp")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    let o = permkit(&["member", "--group", &fixture("s4.grp"), "--pi", "(1 9)"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("--pi") && err.contains("`9`"), "{err}");

    let o = permkit(&["k-base-cyclic", "--group", &fixture("klein4.grp"), "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("not cyclic"));

    let o = permkit(&["k-move", "--group", &fixture("s4.grp"), "--k", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = permkit(&["order", "--group", "/nonexistent.grp"]);
    assert_eq!(o.status.code(), Some(2));
    let o = permkit(&[
        "k-base-bounded",
        "--group",
        &fixture("s4.grp"),
        "--k",
        "2",
        "--b",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = permkit(&["fpf-transitive", "--group", &fixture("c2_on3.grp")]);
    assert_eq!(o.status.code(), Some(2));
    let o = permkit(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resource_errors_exit_three() {
    let o = permkit(&["oracle-stats", "--group", &fixture("s6.grp"), "--cap", "100"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn witnesses_round_trip_and_verify() {
    let s5 = StabilizerChain::build(
        &GroupInput::new(
            5,
            vec![
                Permutation::parse_cycles("(1 2)", 5).unwrap(),
                Permutation::parse_cycles("(1 2 3 4 5)", 5).unwrap(),
            ],
        )
        .unwrap(),
    );
    for cmd in ["fpf-transitive", "max-move", "fpf-coset"] {
        let o = permkit(&[cmd, "--group", &fixture("s5.grp"), "--json"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        let w = json(&o)["witness"].as_str().unwrap().to_string();
        let p = Permutation::parse_cycles(&w, 5).unwrap();
        assert_eq!(p.to_string(), w);
        assert!(s5.contains(&p).unwrap());
    }
}

#[test]
fn coset_flags() {
    let o = permkit(&[
        "expected-move",
        "--group",
        &fixture("c2_on3.grp"),
        "--pi",
        "(1 3)",
    ]);
    assert_eq!(stdout(&o).lines().next(), Some("5/2"));
    let a = permkit(&[
        "count-nonfpf",
        "--group",
        &fixture("s4.grp"),
        "--seed",
        "11",
        "--json",
    ]);
    let b = permkit(&[
        "count-nonfpf",
        "--group",
        &fixture("s4.grp"),
        "--seed",
        "11",
        "--json",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let o = permkit(&[
        "expected-move",
        "--group",
        &fixture("s4.grp"),
        "--pi",
        "()",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stabilizer_and_kernel() {
    let o = permkit(&["stab", "--group", &fixture("s4.grp"), "--delta", "1,2", "--json"]);
    let v = json(&o);
    assert_eq!(v["order"], "2");
    assert_eq!(v["generators"][0], "(3 4)");

    let o = permkit(&["kernel", "--group", &fixture("c2_on3.grp"), "--k", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["answer"], "kernel");
    assert_eq!(v["degree"], 2);
    assert_eq!(v["points"], serde_json::json!([1, 2]));
}

#[test]
fn bases() {
    let o = permkit(&[
        "k-base-brute",
        "--group",
        &fixture("s3.grp"),
        "--k",
        "2",
        "--json",
    ]);
    assert_eq!(json(&o)["base"], serde_json::json!([1, 2]));
    let o = permkit(&[
        "k-base-bounded",
        "--group",
        &fixture("c2c2c2.grp"),
        "--k",
        "2",
        "--b",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = permkit(&["k-base-cyclic", "--group", &fixture("c6.grp"), "--k", "1"]);
    assert_eq!(stdout(&o), "yes\nbase: 1\nsize: 1\n");
}
