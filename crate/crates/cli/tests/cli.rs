use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_freelat"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: stdout {out:?} stderr {err:?}"));
    (code, v)
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("freelat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn index_of_identical_lattices_is_one() {
    let z = fixture("z3.json");
    let (code, v) = run_json(&["index", &z, &z]);
    assert_eq!(code, 0);
    assert_eq!(v["index"], "1");
}

#[test]
fn index_is_generalized() {
    let (code, v) = run_json(&["index", &fixture("z3.json"), &fixture("half_z3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["index"], "1/2");
    assert_eq!(v["index_factors"]["2"], -1);
}

#[test]
fn maxorder_c4() {
    let (code, v) = run_json(&["maxorder", "--group", "C4"]);
    assert_eq!(code, 0);
    assert_eq!(v["index_over_group_ring"], "8");
    assert_eq!(v["formula_matches"], true);
    assert_eq!(v["order"]["mul_tensor"].as_array().unwrap().len(), 4);
}

#[test]
fn maxorder_from_table_files() {
    let s3 = format!("table:{}", fixture("s3.json"));
    let (code, v) = run_json(&["maxorder", "--group", &s3, "--split", &fixture("s3_split.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["index_over_group_ring"], "54");
    let q8 = format!("table:{}", fixture("q8.json"));
    let (code, v) = run_json(&["maxorder", "--group", &q8, "--split", &fixture("q8_split.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["index_over_group_ring"], "512");
    let a4 = format!("table:{}", fixture("a4.json"));
    let (code, v) = run_json(&["maxorder", "--group", &a4, "--split", &fixture("a4_split.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["index_over_group_ring"], "12288");
}

#[test]
fn group_fixtures_parse() {
    for (name, size) in [("s3", 6), ("d4", 8), ("q8", 8), ("a4", 12), ("s4", 24)] {
        let spec = format!("table:{}", fixture(&format!("{name}.json")));
        let (code, v) = run_json(&["group", "--group", &spec]);
        assert_eq!(code, 0);
        assert_eq!(v["size"], size);
    }
}

#[test]
fn conductor_s3_matches_jacobinski() {
    let (code, v) = run_json(&["conductor", "--group", "S3"]);
    assert_eq!(code, 0);
    assert_eq!(v["jacobinski_matches"], true);
    assert_eq!(v["left_equals_right"], true);
    assert_eq!(v["index_in_group_ring"]["decimal"], "54");
}

#[test]
fn bounds_report_is_factored() {
    let (code, v) = run_json(&["bounds", "--group", "C3", "--rank", "1", "--mode", "minkowski"]);
    assert_eq!(code, 0);
    assert_eq!(v["bound"]["decimal"], "1");
    assert_eq!(v["s"], 2);
    let (code, v) = run_json(&["bounds", "--group", "C4", "--rank", "2", "--mode", "lattice"]);
    assert_eq!(code, 0);
    assert_eq!(v["bound"]["factors"]["2"], 12);
    let (code, _, err) = run(&["bounds", "--group", "C4", "--rank", "2", "--mode", "nib"]);
    assert_eq!(code, 1);
    assert!(err.contains("rank 1"));
}

#[test]
fn freesub_certificate_and_seed_determinism() {
    let args = ["freesub", "--group", "C6", "--rank", "2", "--denom", "4", "--seed", "9"];
    let (code, a) = run_json(&args);
    let (_, b) = run_json(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert_eq!(a["verdict"], "true");
    assert_eq!(a["seed"], 9);
    assert_eq!(a["i_factor"]["decimal"], "1");
}

#[test]
fn freesub_trace_quotient_and_lattice_file() {
    let (code, v) = run_json(&["freesub", "--group", "C5", "--trace-quotient", "--denom", "3", "--seed", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["total_index"]["decimal"], "1");
    // feed the emitted lattice back in
    let path = temp_path("tq_lattice.json");
    std::fs::write(&path, v["lattice"].to_string()).unwrap();
    let (code, w) = run_json(&["freesub", "--group", "C5", "--trace-quotient", "--lattice", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(w["input_hash"], v["input_hash"]);
}

#[test]
fn emitted_lattices_round_trip() {
    let (_, v) = run_json(&["conductor", "--group", "C6"]);
    let path = temp_path("conductor.json");
    std::fs::write(&path, v["conductor"].to_string()).unwrap();
    let p = path.to_str().unwrap();
    let (code, w) = run_json(&["index", p, p]);
    assert_eq!(code, 0);
    assert_eq!(w["index"], "1");
    let parsed = freelat::formats::lattice_from_json(&v["conductor"]).unwrap();
    assert_eq!(freelat::formats::lattice_to_json(&parsed), v["conductor"]);
}

#[test]
fn verify_formulas_abelian16_all_pass() {
    let (code, v) = run_json(&["verify", "--suite", "formulas", "--group-set", "abelian16"]);
    assert_eq!(code, 0);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["all_pass"], true);
}

#[test]
fn verify_table_format() {
    let (code, out, _) = run(&["verify", "--suite", "conductor", "--group-set", "C2,S3", "--format", "table"]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| l.starts_with("PASS") || l.contains("passed")));
}

#[test]
fn exit_code_matrix() {
    let missing = fixture("does_not_exist.json");
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec![], 2),
        (vec!["frobnicate"], 2),
        (vec!["maxorder"], 2),
        (vec!["maxorder", "--group", "C0"], 2),
        (vec!["maxorder", "--group", "nonsense"], 2),
        (vec!["index", &missing, &missing], 2),
        (vec!["freesub", "--group", "C2", "--rank", "0"], 2),
        (vec!["verify", "--suite", "nope"], 2),
        (vec!["--help"], 0),
        (vec!["maxorder", "--group", "C2", "--format", "table"], 0),
        (vec!["verify", "--suite", "theorems", "--group-set", "C2", "--seeds", "1"], 0),
    ];
    for (args, want) in cases {
        let (code, _, err) = run(&args);
        assert_eq!(code, want, "{args:?}: {err}");
    }
}

#[test]
fn file_errors_name_the_path() {
    let missing = fixture("does_not_exist.json");
    let (_, _, err) = run(&["index", &missing, &missing]);
    assert!(err.contains("does_not_exist.json"), "{err}");
    let (_, _, err) = run(&["maxorder", "--group", &format!("table:{missing}")]);
    assert!(err.contains("does_not_exist.json"), "{err}");
}

#[test]
fn output_flag_writes_file() {
    let path = temp_path("maxorder_c2.json");
    let (code, out, _) = run(&["maxorder", "--group", "C2", "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["index_over_group_ring"], "2");
}
