use std::process::{Command, Output};

fn juggle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_juggle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn states_lists_weights() {
    let out = juggle(&["states", "--h", "4", "--f", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "xxx-\t8\nxx-x\t4\nx-xx\t2\n-xxx\t1\n");
}

#[test]
fn tl_states_show_projection() {
    let out = juggle(&["states", "--h", "3", "--f", "1", "--tl"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().any(|l| l == "-33\t-xx"));
}

#[test]
fn stationary_exact_table() {
    let out = juggle(&[
        "stationary",
        "--model",
        "standard",
        "--h",
        "5",
        "--f",
        "2",
        "--method",
        "exact",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let first = text.lines().next().unwrap();
    assert_eq!(first, "xxx--\t3/10\t0.300000000000");
    assert!(text.lines().any(|l| l.starts_with("--xxx\t1/90\t")));
}

#[test]
fn stationary_all_cross_checks() {
    for args in [
        vec!["--model", "standard", "--h", "4", "--f", "1"],
        vec!["--model", "tl", "--h", "4", "--f", "2"],
        vec!["--model", "adddrop", "--h", "3"],
        vec!["--model", "annihilation", "--h", "3"],
    ] {
        let mut full = vec!["stationary", "--method", "all", "--steps", "200000"];
        full.extend(args.iter());
        let out = juggle(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn stationary_json_parses() {
    let out = juggle(&[
        "stationary",
        "--model",
        "adddrop",
        "--h",
        "3",
        "--method",
        "closed",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["states"][1], "xx-");
    assert_eq!(v["probs"][1], "4/15");
}

#[test]
fn verify_passes_and_reports_each_check() {
    let out = juggle(&["verify", "--h", "5", "--f", "2", "--checks", "lump,doubly"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("PASS lump"));
    assert_eq!(text.lines().count(), 2);

    let all = juggle(&["verify", "--h", "4", "--f", "1"]);
    assert_eq!(all.status.code(), Some(0));
    assert_eq!(
        stdout(&all)
            .lines()
            .filter(|l| l.starts_with("PASS"))
            .count(),
        5
    );
}

#[test]
fn verify_rejects_unknown_check() {
    let out = juggle(&["verify", "--h", "3", "--f", "1", "--checks", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn graph_dot_for_add_drop_h1() {
    let out = juggle(&["graph", "--model", "adddrop", "--h", "1", "--format", "dot"]);
    let text = stdout(&out);
    assert!(text.starts_with("digraph adddrop_h1 {"));
    assert_eq!(text.matches(" -> ").count(), 4);
    assert!(text.contains("style=dashed"));
    assert!(text.contains("style=dotted"));
}

#[test]
fn graph_json_for_standard() {
    let out = juggle(&[
        "graph", "--model", "standard", "--h", "3", "--f", "1", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn simulate_is_reproducible() {
    let args = [
        "simulate", "--model", "standard", "--h", "4", "--f", "1", "--steps", "5000", "--seed",
        "11",
    ];
    let a = juggle(&args);
    let b = juggle(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["steps"], 5000);
    let total: u64 = v["occupancy"]
        .as_object()
        .unwrap()
        .values()
        .map(|c| c.as_u64().unwrap())
        .sum();
    assert_eq!(total, 5000);
}

#[test]
fn simulate_with_unknown_start_is_usage_error() {
    let out = juggle(&[
        "simulate", "--model", "standard", "--h", "4", "--f", "1", "--start", "xx--",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn partitions_and_roundtrip() {
    let out = juggle(&["partitions", "--h", "3", "--f", "1"]);
    assert!(stdout(&out).lines().any(|l| l == "-33\t{1}|{2,3,4}"));
    let rt = juggle(&["partitions", "--h", "6", "--f", "2", "--roundtrip"]);
    assert_eq!(rt.status.code(), Some(0));
    assert!(stdout(&rt).starts_with("PASS"));
}

#[test]
fn bounds_and_bad_input_exit_2() {
    assert_eq!(
        juggle(&["states", "--h", "0", "--f", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        juggle(&["states", "--h", "3", "--f", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        juggle(&["stationary", "--model", "standard", "--h", "20", "--f", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        juggle(&[
            "stationary",
            "--model",
            "adddrop",
            "--h",
            "13",
            "--method",
            "closed"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        juggle(&["stationary", "--model", "tl", "--h", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(juggle(&["frobnicate"]).status.code(), Some(2));
}
