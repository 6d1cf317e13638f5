use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3sixteen")).args(args).output().expect("spawn k3sixteen")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_matches_golden_text() {
    for (rank, golden) in [
        ("6", include_str!("../golden/classify_rank6.txt")),
        ("14", include_str!("../golden/classify_rank14.txt")),
    ] {
        let o = run(&["classify", "--rank", rank, "--geometry", "on", "--check"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o), golden);
    }
}

#[test]
fn classify_superset_passes_check() {
    let o = run(&["classify", "--rank", "all", "--geometry", "off", "--check", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("m2,")).count(), 1);
    assert!(out.lines().count() > 8);
}

#[test]
fn classify_all_json_is_an_array() {
    let o = run(&["classify", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let docs = doc.as_array().unwrap();
    assert_eq!(docs.len(), 2);
    assert_eq!(docs[0]["rank"], 6);
    assert_eq!(docs[1]["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn fiber_json_golden() {
    let o = run(&["fiber", "--a", "t^2", "--b", "t^7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("../golden/fiber_ii_star.json"));
}

#[test]
fn chain_sequence() {
    let o = run(&["chain", "--start", "0,1", "--order", "16", "--steps", "3"]);
    assert_eq!(stdout(&o), "(0,1) (15,2) (14,3) (13,4)\n");
    let o = run(&["chain", "--start", "2,7", "--order", "8", "--steps", "8"]);
    let pts: Vec<String> = stdout(&o).split_whitespace().map(String::from).collect();
    assert_eq!(pts.len(), 9);
    assert_eq!(pts.first(), pts.last());
}

#[test]
fn verify_reports_equivalence() {
    let o = run(&["verify", "--order", "8", "--bound", "5", "--check", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["checked"], 6u64.pow(3) * 4);
    assert_eq!(doc["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn lattice_summary() {
    let o = run(&["lattice", "U(2)+D4", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["rank"], 6);
    assert_eq!(doc["a"], 4);
    assert_eq!(doc["genus"], 6);
    assert_eq!(doc["rational_curves"], 1);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["lattice", "U+"][..],
        &["chain", "--start", "0,2"],
        &["chain", "--start", "x"],
        &["fiber", "--a", "t^9", "--b", "1"],
        &["fiber", "--a", "0", "--b", "0"],
        &["verify", "--order", "12"],
        &["classify", "--rank", "7"],
        &["nonsense"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}
