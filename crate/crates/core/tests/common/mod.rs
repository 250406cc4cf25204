#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

pub struct Invocation {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub env: &'static [(&'static str, &'static str)],
    pub exit: i32,
    /// Compared byte for byte against `tests/golden/<name>.json`.
    pub golden: bool,
}

const fn inv(
    name: &'static str,
    args: &'static [&'static str],
    exit: i32,
    golden: bool,
) -> Invocation {
    Invocation { name, args, env: &[], exit, golden }
}

pub const INVOCATIONS: &[Invocation] = &[
    inv("density_gnp", &["check-density", "--gen", "gnp:10:0.5:7", "--zeta", "0.5", "--d", "0.2"], 0, true),
    inv("density_c5", &["check-density", "--input", "tests/fixtures/c5.txt", "--zeta", "1/2", "--d", "1/2"], 1, true),
    inv("density_missing_zeta", &["check-density", "--gen", "gnp:10:0.5:7", "--d", "0.2"], 3, false),
    inv("density_scale", &["check-density", "--gen", "complete:30", "--zeta", "1/2", "--d", "1/2"], 2, true),
    Invocation {
        name: "density_env_limit",
        args: &["check-density", "--gen", "gnp:10:0.5:7", "--zeta", "0.5", "--d", "0.2"],
        env: &[("SPARSECOUNT_MAX_EXHAUSTIVE_N", "8")],
        exit: 2,
        golden: true,
    },
    inv("density_short_file", &["check-density", "--input", "tests/fixtures/short.txt", "--zeta", "1/2", "--d", "1/2"], 3, true),
    inv("density_out_of_range", &["check-density", "--input", "tests/fixtures/out_of_range.txt", "--zeta", "1/2", "--d", "1/2"], 3, false),
    inv("density_bad_spec", &["check-density", "--gen", "gnp:ten:0.5:7", "--zeta", "1/2", "--d", "1/2"], 3, false),
    inv("count_bound_multipartite", &["verify-count-bound", "--gen", "multipartite:4:4:4", "--zeta", "1/2", "--d", "2/5", "--bound", "1", "--s", "10"], 0, true),
    inv("count_bound_s_below_f", &["verify-count-bound", "--gen", "multipartite:4:4:4", "--zeta", "1/2", "--d", "2/5", "--bound", "1", "--s", "5"], 2, true),
    inv("count_bound_not_dense", &["verify-count-bound", "--gen", "empty:8", "--zeta", "1/2", "--d", "1/2", "--bound", "1", "--s", "8"], 2, true),
    inv("sparsify_complete", &["sparsify", "--gen", "complete:2000", "--zeta", "1/2", "--d", "1/2", "--bound", "1", "--seed", "1"], 0, true),
    inv("sparsify_gnp_spot_check", &["sparsify", "--gen", "gnp:300:0.5:1", "--zeta", "1/2", "--d", "2/5", "--bound", "1", "--seed", "5", "--verify-mode", "spot-check", "--trials", "50"], 0, true),
    inv("sparsify_infeasible", &["sparsify", "--gen", "complete:16", "--zeta", "1/4", "--d", "1/2", "--bound", "5"], 2, true),
    inv("sparsify_exhausted", &["sparsify", "--gen", "complete:2000", "--zeta", "1/2", "--d", "1/2", "--bound", "1", "--seed", "1", "--max-attempts", "0"], 1, true),
    inv("sparsify_bad_mode", &["sparsify", "--gen", "complete:20", "--zeta", "1/2", "--d", "1/2", "--bound", "1", "--verify-mode", "magic"], 3, false),
    inv("params_geometry_q3", &["params", "geometry", "--q", "3"], 0, true),
    inv("params_no_sparse_q2_41", &["params", "no-sparse", "--q", "2199023255552", "--bound", "1"], 0, true),
    inv("params_no_sparse_q0", &["params", "no-sparse", "--q", "0", "--bound", "1"], 3, true),
    inv("params_erdos_rogers_alpha0", &["params", "erdos-rogers", "--n", "1000", "--alpha", "0"], 0, true),
    inv("params_erdos_rogers_bad_alpha", &["params", "erdos-rogers", "--n", "1000", "--alpha", "abc"], 3, false),
    inv("suite_count_bound", &["suite", "--suite", "count-bound", "--sweep", "n=8..10,p=0.9,seeds=0..2"], 0, true),
    inv("suite_empty_sweep", &["suite", "--suite", "container-step", "--sweep", "n=9..8,p=0.5,seeds=0..3"], 0, true),
    inv("suite_unknown", &["suite", "--suite", "nope", "--sweep", "n=8,p=0.5,seeds=0"], 3, false),
    inv("suite_exhaustive", &["suite", "--suite", "container-step", "--exhaustive", "5"], 0, true),
    inv("count_cycle_list", &["count", "--gen", "cycle:5", "--bound", "1", "--s", "2", "--list"], 0, true),
    inv("fingerprint_cycle", &["fingerprint", "--gen", "cycle:20", "--zeta", "1/2", "--d", "1/2", "--bound", "1", "--set", "0,2,4,6,8,10,12,14,16,18"], 0, true),
    inv("fingerprint_not_sparse", &["fingerprint", "--gen", "cycle:20", "--zeta", "1/2", "--d", "1/2", "--bound", "1", "--set", "0,1,4,6,8,10,12,14,16,18"], 2, true),
];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn execute(inv: &Invocation) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sparsecount"));
    cmd.current_dir(manifest_dir()).arg("--no-timing").args(inv.args);
    for var in [
        "SPARSECOUNT_MAX_EXHAUSTIVE_N",
        "SPARSECOUNT_MAX_COUNT_SUBSETS",
        "SPARSECOUNT_MAX_BAD_SET_SUBSETS",
    ] {
        cmd.env_remove(var);
    }
    for (k, v) in inv.env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Output {
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
        code: out.status.code().expect("exit code"),
    }
}

/// Top-level `required` keys and `status` values from the shipped schema.
fn check_schema(report: &Value) -> Result<(), String> {
    let text = std::fs::read_to_string(manifest_dir().join("schema/report.schema.json"))
        .map_err(|e| format!("schema unreadable: {e}"))?;
    let schema: Value = serde_json::from_str(&text).map_err(|e| format!("schema: {e}"))?;
    for key in schema["required"].as_array().ok_or("schema has no required list")? {
        let key = key.as_str().unwrap();
        if report.get(key).is_none() {
            return Err(format!("report lacks {key}"));
        }
    }
    let allowed = &schema["properties"]["status"]["enum"];
    if !allowed.as_array().is_some_and(|a| a.contains(&report["status"])) {
        return Err(format!("status {} not in schema", report["status"]));
    }
    for key in report.as_object().ok_or("report is not an object")?.keys() {
        if schema["properties"].get(key).is_none() {
            return Err(format!("report key {key} not in schema"));
        }
    }
    Ok(())
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir().join("tests/golden").join(format!("{name}.json"))
}

/// Runs one invocation and checks its exit code, report shape and golden
/// file. With `UPDATE_GOLDEN=1` the golden file is rewritten instead.
pub fn check(inv: &Invocation) -> Result<(), String> {
    let out = execute(inv);
    if out.code != inv.exit {
        return Err(format!(
            "{}: exit {} (expected {})\nstderr: {}",
            inv.name, out.code, inv.exit, out.stderr
        ));
    }
    if out.stdout.is_empty() {
        // usage errors from argument parsing print to stderr only
        return if inv.exit == 3 && !out.stderr.is_empty() && !inv.golden {
            Ok(())
        } else {
            Err(format!("{}: no report on stdout", inv.name))
        };
    }
    let report: Value = serde_json::from_str(&out.stdout).map_err(|e| format!("{}: bad JSON: {e}", inv.name))?;
    if report["exit_code"] != inv.exit {
        return Err(format!("{}: report exit_code {}", inv.name, report["exit_code"]));
    }
    check_schema(&report).map_err(|e| format!("{}: {e}", inv.name))?;
    if inv.golden {
        let path = golden_path(inv.name);
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&path, &out.stdout).map_err(|e| e.to_string())?;
        } else {
            let want = std::fs::read_to_string(&path)
                .map_err(|e| format!("{}: missing golden {}: {e}", inv.name, path.display()))?;
            if want != out.stdout {
                return Err(format!("{}: output differs from {}", inv.name, path.display()));
            }
        }
    }
    Ok(())
}
