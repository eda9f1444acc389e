//! Black-box tests of the `taxiseed` binary: JSON envelopes, CSV output,
//! exit codes, and the scan checkpoint workflow.

use std::process::{Command, Output};

fn taxiseed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taxiseed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn taxicab_envelope_for_ramanujan_number() {
    let out = taxiseed(&["taxicab", "-n", "2", "-m", "3", "-t", "2", "--limit", "2000"]);
    let v = json_of(&out);
    assert_eq!(v["command"], "taxicab");
    assert_eq!(v["parameters"]["n"], 2);
    assert_eq!(v["parameters"]["limit"], 2000);
    assert_eq!(v["result"]["value"], "1729");
    let reps = v["result"]["representations"].as_array().unwrap();
    assert_eq!(reps.len(), 2);
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn taxicab_representations_are_canonical() {
    let out = taxiseed(&["taxicab", "-n", "2", "-m", "3", "-t", "2", "--limit", "2000"]);
    let v = json_of(&out);
    let reps = v["result"]["representations"].as_array().unwrap();
    // Nonincreasing bases, first-found order: 12^3+1^3 then 10^3+9^3.
    assert_eq!(reps[0], serde_json::json!([12, 1]));
    assert_eq!(reps[1], serde_json::json!([10, 9]));
}

#[test]
fn taxicab_default_limit_from_seed() {
    // n = 9 >= S(3, 2) = 9, so no --limit is needed and T = 72.
    let out = taxiseed(&["taxicab", "-n", "9", "-m", "3", "-t", "2"]);
    let v = json_of(&out);
    assert_eq!(v["result"]["value"], "72");
    assert_eq!(v["parameters"]["limit"], 73);
}

#[test]
fn taxicab_not_found_exits_one() {
    let out = taxiseed(&["taxicab", "-n", "1", "-m", "3", "-t", "2", "--limit", "1000"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("1000"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(taxiseed(&["taxicab", "-n", "2"]).status.code(), Some(2));
    assert_eq!(taxiseed(&["table", "-t", "4", "--m-max", "5"]).status.code(), Some(2));
    assert_eq!(taxiseed(&["nope"]).status.code(), Some(2));
    // --resume without --out is rejected by the parser.
    assert_eq!(
        taxiseed(&["scan", "--from", "1", "--to", "5", "--resume"]).status.code(),
        Some(2)
    );
}

#[test]
fn seed_command_reports_case_label() {
    let v = json_of(&taxiseed(&["seed", "-m", "6", "-t", "3"]));
    assert_eq!(v["result"]["seed_number"], "104");
    assert_eq!(v["result"]["seed_value"], "6656");
    assert_eq!(v["result"]["status"], "exact");
    assert_eq!(v["result"]["case_label"], "case3-l3");
}

#[test]
fn seed_conjecture_agrees_with_formula() {
    let a = json_of(&taxiseed(&["seed", "-m", "7", "-t", "3"]));
    let b = json_of(&taxiseed(&["seed", "-m", "7", "-t", "3", "--conjecture"]));
    assert_eq!(a["result"]["seed_number"], b["result"]["seed_number"]);
    assert_eq!(a["result"]["seed_value"], b["result"]["seed_value"]);

    let c = json_of(&taxiseed(&["seed", "-m", "2", "-t", "4", "--conjecture"]));
    assert_eq!(c["result"]["status"], "conjectured-upper-bound");
}

#[test]
fn table_csv_matches_known_two_way_rows() {
    let out = taxiseed(&["table", "-t", "2", "--m-max", "20", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 21);
    assert_eq!(lines[0], "m,d,s,v");
    assert_eq!(lines[1], "1,1,2,4");
    assert_eq!(lines[2], "2,1,5,20");
    assert_eq!(lines[3], "3,1,9,72");
    assert_eq!(lines[4], "4,5,16,256");
    assert_eq!(lines[12], "12,455,1168,4784128");
    assert_eq!(lines[20], "20,275,1048577,1099512676352");
}

#[test]
fn drops_reports_cube_drop_set() {
    let v = json_of(&taxiseed(&[
        "drops", "-m", "3", "-t", "2", "--n-max", "12", "--v-limit", "2000",
    ]));
    assert_eq!(v["result"]["n0"], 2);
    assert_eq!(v["result"]["drops"], serde_json::json!([2, 3, 4, 6, 8]));
    assert_eq!(v["result"]["empirical_seed"], 9);
    assert_eq!(v["result"]["seed_value"], "72");
    assert_eq!(v["result"]["window_truncated"], false);
}

#[test]
fn construct_kinds_round_trip() {
    for (args, value) in [
        (vec!["construct", "-m", "2", "--kind", "eq1"], "20"),
        (vec!["construct", "-m", "2", "--kind", "eq2"], "32"),
        (vec!["construct", "-m", "3", "--kind", "thm51"], "72"),
        (vec!["construct", "-m", "3", "-t", "4", "--kind", "lemma21"], ""),
    ] {
        let v = json_of(&taxiseed(&args));
        assert_eq!(v["result"]["verified"], true, "{args:?}");
        assert!(v["result"]["discrepancy"].is_null());
        if !value.is_empty() {
            assert_eq!(v["result"]["witness"]["common_value"], value, "{args:?}");
        }
    }
}

#[test]
fn construct_precondition_failure_exits_two() {
    // The l3-padded three-way identity needs l3 <= l4, which fails at m = 2.
    let out = taxiseed(&["construct", "-m", "2", "--kind", "eq4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = taxiseed(&["construct", "-m", "2", "--kind", "eq99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_inline_csv() {
    let out = taxiseed(&["scan", "--from", "1", "--to", "8", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], "m,d,l3,l4,s2,s2_source,s3,s3_case,exceptional_two_way");
    assert_eq!(lines[7], "7,1,2186,129,129,l4,258,case1-2l4,false");
}

#[test]
fn scan_to_file_then_resume() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rows.csv");
    let out_str = out_path.to_str().unwrap();

    let v = json_of(&taxiseed(&["scan", "--from", "1", "--to", "40", "--out", out_str, "--csv"]));
    assert_eq!(v["result"]["records_written"], 40);
    assert_eq!(v["result"]["last_m"], 40);

    let v = json_of(&taxiseed(&[
        "scan", "--from", "1", "--to", "60", "--out", out_str, "--csv", "--resume",
    ]));
    assert_eq!(v["result"]["records_written"], 20);
    assert_eq!(v["result"]["resumed_from"], 40);

    let text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(text.lines().count(), 61);
    assert!(text.lines().last().unwrap().starts_with("60,"));
}

#[test]
fn verify_exact_cases_exit_zero() {
    for (m, t) in [(1, 2), (2, 2), (3, 2), (4, 2), (1, 3), (4, 3)] {
        let out = taxiseed(&["verify", "-m", &m.to_string(), "-t", &t.to_string()]);
        let v = json_of(&out);
        assert_eq!(v["result"]["match"], true, "m = {m}, t = {t}");
    }
}

// The closed-form three-way table disagrees with exhaustive search at m = 2:
// the search finds seed 4 with value 28 instead of 8 with 32. The binary
// reports the mismatch and exits 3.
#[test]
fn verify_reports_three_way_mismatch_at_m2() {
    let out = taxiseed(&["verify", "-m", "2", "-t", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["match"], false);
    assert_eq!(v["result"]["formula_seed"], "8");
    assert_eq!(v["result"]["empirical_seed"], "4");
    assert_eq!(v["result"]["empirical_value"], "28");
}

#[test]
fn verify_rejects_out_of_range_parameters() {
    assert_eq!(taxiseed(&["verify", "-m", "9", "-t", "2"]).status.code(), Some(2));
    assert_eq!(taxiseed(&["verify", "-m", "3", "-t", "4"]).status.code(), Some(2));
}
