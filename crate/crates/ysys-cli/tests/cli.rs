//! End-to-end tests of the binary: subcommand output and the exit-code
//! contract (0 ok, 2 validation, 3 property failure, 4 resource bound).

use std::process::{Command, Output};

fn ysys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ysys"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn validate_accepts_presets() {
    let v = stdout_json(&ysys(&["validate", "--pair", "table1:2"]));
    assert_eq!(v["valid"], true);
}

#[test]
fn validate_rejects_unknown_preset_with_exit_2() {
    let out = ysys(&["validate", "--pair", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_rejects_bad_support_with_exit_2() {
    let dir = std::env::temp_dir().join("ysys-cli-test-support");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad_support.json");
    std::fs::write(
        &path,
        r#"{"I":["1","2"],"r":{"1":2,"2":2},"n":[{"i":"1","j":"1","p":0,"v":1}]}"#,
    )
    .unwrap();
    let out = ysys(&["validate", "--pair", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Eq-Y1 violation at (1,1,0)"), "stderr: {err}");
}

#[test]
fn validate_rejects_non_symplectic_with_exit_3() {
    let dir = std::env::temp_dir().join("ysys-cli-test-symp");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("non_symplectic.json");
    std::fs::write(
        &path,
        r#"{"I":["1","2"],"r":{"1":2,"2":2},"n":[{"i":"1","j":"2","p":1,"v":1},{"i":"2","j":"1","p":1,"v":2}]}"#,
    )
    .unwrap();
    let out = ysys(&["validate", "--pair", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("symplectic"));
}

#[test]
fn report_contains_goldens_for_row_1() {
    let v = stdout_json(&ysys(&["report", "--pair", "table1:1"]));
    assert_eq!(v["h_plus"], 3);
    assert_eq!(v["h_minus"], 2);
    assert_eq!(v["period"], 10);
    assert_eq!(v["K"][0][0], "4/3");
    assert_eq!(v["K"][0][1], "2/3");
    assert_eq!(v["quiver"]["vertices"].as_array().unwrap().len(), 4);
}

#[test]
fn report_zero_interaction_pair() {
    // Y(u) Y(u - r) = 1 gives period 2r: r = 1 has period 2.
    let v = stdout_json(&ysys(&["report", "--pair", "zero:1"]));
    assert_eq!(v["period"], 2);
    assert_eq!(v["K"][0][0], "1");
}

#[test]
fn report_dot_output() {
    let out = ysys(&["report", "--pair", "table1:4", "--dot"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("digraph"));
    assert!(text.contains("->"));
}

#[test]
fn reddening_and_period_subcommands() {
    let v = stdout_json(&ysys(&["reddening", "--pair", "table1:5"]));
    assert_eq!(v["h_plus"], 5);
    assert_eq!(v["h_minus"], 3);
    let v = stdout_json(&ysys(&["period", "--pair", "table1:6"]));
    assert_eq!(v["period"], 7);
}

#[test]
fn evolve_reports_sign_coherent_c_vectors() {
    let v = stdout_json(&ysys(&["evolve", "--pair", "table1:1", "--steps", "3"]));
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.len(), 4);
    for row in trace {
        assert_eq!(row["sign_coherent"], true);
    }
    // Backward evolution also works.
    let v = stdout_json(&ysys(&["evolve", "--pair", "table1:1", "--steps", "-2"]));
    assert_eq!(v["trace"].as_array().unwrap().len(), 3);
}

#[test]
fn classify_golden_small() {
    let out = ysys(&["classify", "--rmax", "4", "--golden"]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 6);
    assert_eq!(v["ban_enabled"], true);
}

#[test]
fn classify_no_ban_reports_extra_candidates() {
    let out = ysys(&["classify", "--rmax", "2", "--no-ban"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ban_enabled"], false);
    assert!(v["candidates"].as_array().unwrap().len() > 6);
}

#[test]
fn nahm_against_product() {
    let v = stdout_json(&ysys(&["nahm", "--against-product", "--order", "12"]));
    for row in v["identities"].as_array().unwrap() {
        assert_eq!(row["agree"], true);
    }
}

#[test]
fn nahm_table_lists_twelve_entries() {
    let v = stdout_json(&ysys(&["nahm", "--order", "4"]));
    assert_eq!(v["entries"].as_array().unwrap().len(), 12);
}

#[test]
fn qdilog_identity_for_row_4() {
    let v = stdout_json(&ysys(&["qdilog", "--pair", "table1:4", "--degree", "6"]));
    assert_eq!(v["identity"], true);
    assert_eq!(v["h_plus"], 3);
    assert_eq!(v["h_minus"], 3);
}

#[test]
fn exhausted_search_bound_exits_4() {
    let out = ysys(&["period", "--pair", "table1:1", "--max", "1"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource"));
}

#[test]
fn sequential_jobs_flag_gives_identical_output() {
    let a = stdout_json(&ysys(&["report", "--pair", "table1:2"]));
    let b = stdout_json(&ysys(&["--jobs", "1", "report", "--pair", "table1:2"]));
    assert_eq!(a, b);
}
