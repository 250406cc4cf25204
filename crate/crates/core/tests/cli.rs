mod common;

use common::{check, execute, INVOCATIONS};

#[test]
fn scripted_invocations() {
    let failures: Vec<String> = INVOCATIONS.iter().filter_map(|inv| check(inv).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn repeated_runs_are_identical() {
    for inv in INVOCATIONS.iter().filter(|i| i.golden) {
        assert_eq!(execute(inv).stdout, execute(inv).stdout, "{}", inv.name);
    }
}

#[test]
fn timing_is_reported_by_default() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_sparsecount"))
        .args(["params", "geometry", "--q", "5"])
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["wall_time_ms"].is_u64());
}

#[test]
fn echoed_command_reruns_to_the_same_payload() {
    let inv = INVOCATIONS.iter().find(|i| i.name == "sparsify_complete").unwrap();
    let first: serde_json::Value = serde_json::from_str(&execute(inv).stdout).unwrap();
    let echoed: Vec<String> = first["command"]
        .as_str()
        .unwrap()
        .split(' ')
        .map(str::to_string)
        .collect();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_sparsecount"))
        .current_dir(common::manifest_dir())
        .args(&echoed)
        .output()
        .unwrap();
    let second: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(first["result"], second["result"]);
}

#[test]
fn edge_list_file_round_trip() {
    let g = sparsecount::generators::gnp(12, 0.4, 3).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    g.write_edge_list(std::fs::File::create(&path).unwrap()).unwrap();
    let run = |source: &[&str]| {
        let mut args = vec!["sparsecount", "--no-timing", "count"];
        args.extend_from_slice(source);
        args.extend_from_slice(&["--bound", "2", "--s", "4"]);
        let r = sparsecount::cli::run(args);
        let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
        v["result"]["count"].clone()
    };
    let path = path.to_str().unwrap();
    assert_eq!(run(&["--input", path]), run(&["--gen", "gnp:12:0.4:3"]));
}
