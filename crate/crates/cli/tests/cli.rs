use std::process::{Command, Output};

use kcalc_cli::{KRecord, ReduceRecord, SnfRecord, StageRow, TRecord, WitnessRecord};
use serde::de::DeserializeOwned;

const PAPER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/defs/paper.kc");

fn kcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcalc")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = kcalc(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn records<T: DeserializeOwned>(args: &[&str]) -> Vec<T> {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    stdout(&full).lines().map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{l}: {e}"))).collect()
}

#[test]
fn documented_invocations() {
    let eval = stdout(&["eval", "-f", PAPER, "--name", "D", "--R", "1@2,3@5", "--cutoff", "5", "--atoms", "Zero"]);
    assert!(eval.starts_with("K₀ = Z (+) Z/2 (+) Z/5 (+) Z/11\nK₁ = Z/2 (+) Z/5 (+) Z/11\n"), "{eval}");
    assert_eq!(stdout(&["reduce", "--R", "1@2,3@5", "--n", "0"]), "0 ∉ R; witness: element of order 2\n");
    assert_eq!(stdout(&["reduce", "--R", "1@2,3@5", "--n", "1"]), "1 ∈ R; witness: stage 2\n");
    assert_eq!(stdout(&["snf", "--matrix", "2 0; 0 3"]), "1 6\n");
}

#[test]
fn stage_table_symbols() {
    let table = stdout(&["stages", "--R", "0@7", "--n", "0", "--k-max", "9", "--s-max", "12"]);
    let rows: Vec<&str> = table.lines().skip(2).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows[3].contains("···qqqq000000"), "{}", rows[3]);
    assert!(rows[9].contains("·········1111"), "{}", rows[9]);
}

#[test]
fn tseq_marks_increases() {
    let args = ["tseq", "--R", "0@4", "--n", "0", "--rho", "x0 + 3", "--oracle", "2:1:1/2", "--horizon", "6"];
    let text = stdout(&args);
    assert!(text.contains("<- increase"));
    assert!(text.ends_with("increases at s = 4\n"), "{text}");
    let recs: Vec<TRecord> = records(&args);
    assert_eq!(recs.len(), 7);
    assert_eq!((recs[3].t.as_str(), recs[4].t.as_str()), ("17/8", "3"));
    assert!(recs[4].increase && !recs[3].increase);
}

#[test]
fn json_records_round_trip() {
    let suite: Vec<KRecord> = records(&["paper-suite", "--R", "1@2,3@5", "--cutoff", "5"]);
    let names: Vec<&str> = suite.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, ["B", "C", "A", "D", "B'", "A'", "E"]);
    for r in &suite {
        let again: KRecord = serde_json::from_str(&serde_json::to_string(r).unwrap()).unwrap();
        assert_eq!(&again, r);
        assert_eq!(r.cutoff, 5);
    }
    assert_eq!(suite[3].k0.to_string(), "Z (+) Z/2 (+) Z/5 (+) Z/11");

    let eval: Vec<KRecord> = records(&["eval", "--name", "E", "--R", "1@2,3@5", "--atoms", "Zero"]);
    assert_eq!(eval[0].k1, suite[6].k1);

    let reduce: Vec<ReduceRecord> = records(&["reduce", "--R", "1@2,3@5", "--n", "0"]);
    assert!(!reduce[0].member);
    assert!(matches!(reduce[0].witness, WitnessRecord::Element { order: 2, .. }));

    let stages: Vec<StageRow> = records(&["stages", "--R", "0@7", "--n", "0", "--k-max", "3", "--s-max", "9"]);
    assert_eq!(stages.len(), 4);
    assert_eq!(stages[3].row, "···qqqq000");
    assert_eq!(stages[3].limit.as_deref(), Some("0"));

    let snf: Vec<SnfRecord> = records(&["snf", "--matrix", "2 4 4; -6 6 12; 10 -4 -16"]);
    assert_eq!(snf[0].invariant_factors, ["2", "6", "12"]);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let invocations: [&[&str]; 4] = [
        &["paper-suite", "--R", "0@3,2@1,5@9", "--cutoff", "8", "--atoms", "C"],
        &["--json", "eval", "--R", "1@2", "--symbolic"],
        &["stages", "--R", "machine", "--n", "2", "--k-max", "5", "--s-max", "30"],
        &["--json", "reduce", "--R", "4@6", "--n", "3"],
    ];
    for args in invocations {
        let a = kcalc(args);
        let b = kcalc(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| kcalc(args).status.code().unwrap();
    assert_eq!(code(&["snf", "--matrix", "1 2; 3 4"]), 0);
    // usage errors
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["snf"]), 2);
    assert_eq!(code(&["snf", "--matrix", "1 2; 3"]), 2);
    assert_eq!(code(&["eval", "--R", "1@"]), 2);
    assert_eq!(code(&["eval", "--atoms", "Q"]), 2);
    assert_eq!(code(&["eval", "--name", "Nope"]), 2);
    assert_eq!(code(&["tseq", "--n", "0", "--rho", "x0 +"]), 2);
    // domain errors
    assert_eq!(code(&["eval", "--R", "machine"]), 1);
    assert_eq!(code(&["reduce", "--R", "machine", "--n", "0"]), 1);
    assert_eq!(code(&["tseq", "--n", "0", "--rho", "x3", "--horizon", "1"]), 0);
    let stderr = String::from_utf8(kcalc(&["eval", "--R", "1@"]).stderr).unwrap();
    assert!(stderr.contains("--R"), "{stderr}");
}

#[test]
fn definition_errors_are_reported() {
    let dir = std::env::temp_dir().join(format!("kcalc-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.kc");
    std::fs::write(&bad, "X = O(1);\nX").unwrap();
    let out = kcalc(&["eval", "-f", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:7"));
    let partial = dir.join("partial.kc");
    std::fs::write(&partial, "B = C;\nB").unwrap();
    assert_eq!(kcalc(&["paper-suite", "-f", partial.to_str().unwrap()]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
