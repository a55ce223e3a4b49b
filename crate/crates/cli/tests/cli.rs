use std::path::Path;
use std::process::{Command, Output};

use bentforge::dillon::{is_bent, DillonFile, FamilyParams};
use bentforge::{FieldCtx, FieldSpec};

fn bentforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bentforge"))
        .args(args)
        .env_remove("BENTFORGE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn field_info_lists_divisors_with_trace_degree() {
    let out = bentforge(&["field-info", "--p", "2", "--n", "6"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("|U| = 9"));
    // 9 | 2^6 - 1 but not 2^2 - 1; 3 | 2^2 - 1.
    for row in ["1\t1", "3\t2", "9\t6"] {
        assert!(text.lines().any(|l| l == row), "missing row {row:?} in\n{text}");
    }
}

#[test]
fn field_info_ternary_unit_circle() {
    let out = bentforge(&["field-info", "--p", "3", "--n", "6"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("|U| = 28"));
}

#[test]
fn field_info_rejects_composite_p() {
    let out = bentforge(&["field-info", "--p", "4", "--n", "2"]);
    assert_ne!(code(&out), 0);
    assert!(!stderr(&out).is_empty());
}

#[test]
fn field_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let spec = FieldSpec::smallest_primitive(3, 4).unwrap();
    let path = write_json(dir.path(), "field.json", &spec);
    let from_file = bentforge(&["field-info", "--field-file", &path]);
    let from_flags = bentforge(&["field-info", "--p", "3", "--n", "4"]);
    assert_eq!(code(&from_file), 0, "{}", stderr(&from_file));
    assert_eq!(stdout(&from_file), stdout(&from_flags));
}

#[test]
fn field_sources_are_exclusive() {
    let out = bentforge(&["field-info", "--p", "3", "--n", "4", "--field-file", "x.json"]);
    assert_eq!(code(&out), 2);
}

#[derive(Debug, PartialEq, serde::Deserialize)]
struct Row {
    alpha_log: String,
    value_coeffs: String,
}

#[test]
fn kloosterman_table_binary() {
    let out = bentforge(&["kloosterman", "--p", "2", "--m", "3"]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<Row> = reader.deserialize().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 8);
    let zero = rows.iter().find(|r| r.alpha_log == "zero").unwrap();
    assert_eq!(zero.value_coeffs, "[0]");
    // Binary Kloosterman sums are 0 mod 4 and bounded by 2 * 2^{3/2}.
    for r in &rows {
        let v: i64 = r.value_coeffs.trim_matches(['[', ']']).parse().unwrap();
        assert_eq!(v.rem_euclid(4), 0);
        assert!(v.abs() <= 5);
    }
}

#[test]
fn kloosterman_csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("k.csv");
    let json_path = dir.path().join("k.json");
    for (fmt, path) in [("csv", &csv_path), ("json", &json_path)] {
        let out = bentforge(&[
            "kloosterman", "--p", "3", "--m", "3", "--format", fmt, "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let from_csv: Vec<Row> = reader.deserialize().map(|r| r.unwrap()).collect();
    let from_json: Vec<Row> =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(from_csv.len(), 27);
    assert_eq!(from_csv, from_json);
}

fn b2_witness(bent: bool) -> DillonFile {
    let ctx = FieldCtx::new(2, 6).unwrap();
    let f = ctx
        .nonzero()
        .map(|a| FamilyParams::B2 { r: 3, s: 1, a }.to_dillon(&ctx).unwrap())
        .find(|f| is_bent(&ctx, &f.truth_table(&ctx).unwrap()).unwrap().is_bent == bent)
        .expect("witness exists");
    f.to_file(&ctx)
}

#[test]
fn verify_bent_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_json(dir.path(), "f.json", &b2_witness(true));
    let out = bentforge(&["verify", &path]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("regular bent"));
    assert!(text.contains("S = [1]"), "{text}");
}

#[test]
fn verify_non_bent_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_json(dir.path(), "f.json", &b2_witness(false));
    assert_eq!(code(&bentforge(&["verify", &path])), 1);
}

#[test]
fn verify_zero_function_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = DillonFile {
        field: FieldSpec::smallest_primitive(2, 4).unwrap(),
        d: 1,
        a: vec![(1, vec![0, 0, 0, 0])],
        b: vec![0, 0, 0, 0],
    };
    let path = write_json(dir.path(), "zero.json", &file);
    let out = bentforge(&["verify", &path]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    assert!(stdout(&out).contains("not bent"));
}

#[test]
fn verify_truncated_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"field": {"p": 2, "n": 4, "modu"#).unwrap();
    let out = bentforge(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("parse error"));
}

#[test]
fn golden_example1() {
    let out = bentforge(&["search", "--golden", "example1"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("bent=9 "), "{text}");
    assert!(text.contains("ordered=18"));
}

#[test]
fn golden_example4_reports_variant() {
    let out = bentforge(&["search", "--golden", "example4", "--threads", "1"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("[exponent=104] bent=48 regular=48"), "{text}");
    assert!(text.contains("matched by exponent=104"));
}

#[test]
fn golden_unknown_name() {
    assert_eq!(code(&bentforge(&["search", "--golden", "example9"])), 2);
}

#[test]
fn family_search_b2() {
    let out = bentforge(&["search", "--family", "b2", "--p", "2", "--n", "6", "--r", "3", "--s", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("records=63 bent=36 regular=36 disagreements=0"));
}

#[test]
fn family_search_needs_parameters() {
    let out = bentforge(&["search", "--family", "b2", "--p", "2", "--n", "6", "--r", "3"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--s"));
}

#[test]
fn family_search_cap() {
    let out = bentforge(&[
        "search", "--family", "b2", "--p", "2", "--n", "6", "--r", "3", "--s", "1", "--cap", "10",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cap"));
}

#[test]
fn search_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "2")] {
        let out = Command::new(env!("CARGO_BIN_EXE_bentforge"))
            .args(["search", "--golden", "example2", "--out", path.to_str().unwrap()])
            .env("BENTFORGE_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    assert_eq!(String::from_utf8(first).unwrap().lines().count(), 91);
    assert!(dir.path().join("a.csv.summary").exists());
}

#[test]
fn check_commands_pass() {
    for args in [
        ["check", "--id", "lemma-s0", "--p", "2", "--m", "3"],
        ["check", "--id", "prop-unique-u", "--p", "3", "--n", "6"],
        ["check", "--id", "cor-s1s3", "--p", "3", "--m", "3"],
    ] {
        let out = bentforge(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stdout(&out));
        assert!(stdout(&out).trim_end().ends_with("pass"));
    }
}

#[test]
fn check_unknown_id() {
    let out = bentforge(&["check", "--id", "thm99", "--p", "2", "--m", "3"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown check"));
}
