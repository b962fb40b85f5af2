use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qmds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn construct_to(path: &Path, seed: &str) -> Output {
    qmds(&[
        "construct",
        "--q",
        "7",
        "--family",
        "1",
        "--case",
        "1",
        "--h",
        "2",
        "--r",
        "2",
        "--k",
        "5",
        "--seed",
        seed,
        "--out",
        path.to_str().unwrap(),
    ])
}

#[test]
fn construct_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("code.json");
    let o = construct_to(&file, "0");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("[[25,15,6]]_7"));

    let o = qmds(&["verify", "--in", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["mds"]["result"], "full");
    assert_eq!(report["mds"]["checked"], 53130);
    assert_eq!(report["computed"]["d"], 6);
}

#[test]
fn identical_flags_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    construct_to(&a, "9");
    construct_to(&b, "9");
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn hypothesis_violations_exit_2() {
    let o = qmds(&[
        "construct", "--q", "7", "--family", "1", "--case", "1", "--h", "2", "--r", "1", "--k", "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("h/2+1≤r≤h"), "{}", stderr(&o));

    let o = qmds(&[
        "construct", "--q", "7", "--family", "1", "--h", "2", "--r", "2", "--k", "0",
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = qmds(&["construct", "--q", "8", "--family", "1", "--h", "2", "--r", "2", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corrupted_artifact_exits_4_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("code.json");
    construct_to(&file, "0");
    let mut art: serde_json::Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    let v = art["code"]["multipliers"][4].as_u64().unwrap();
    art["code"]["multipliers"][4] = serde_json::json!((v + 1) % 48);
    fs::write(&file, serde_json::to_string(&art).unwrap()).unwrap();

    let o = qmds(&["verify", "--in", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["power_sum_witness"].is_array());
    assert!(report["gram_witness"].is_array());
}

#[test]
fn truncated_artifact_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("code.json");
    construct_to(&file, "0");
    let text = fs::read_to_string(&file).unwrap();
    fs::write(&file, &text[..text.len() / 3]).unwrap();
    let o = qmds(&["verify", "--in", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sset_reports_agreement() {
    let o = qmds(&["sset", "--q", "7", "--h", "2", "--k", "5", "--family", "1", "--t", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("closed form: {0,2}"));
    assert!(out.contains("oracle:      {0,2}"));
    assert!(out.trim_end().ends_with("AGREE"));

    let o = qmds(&["sset", "--q", "13", "--h", "4", "--k", "9", "--family", "2", "--t", "1"]);
    assert!(stdout(&o).contains("{1,3,5}"));

    let o = qmds(&["sset", "--q", "13", "--h", "4", "--k", "1", "--family", "2", "--t", "1"]);
    assert!(stdout(&o).contains("closed form: ∅"));
    assert!(stdout(&o).trim_end().ends_with("AGREE"));

    let o = qmds(&["sset", "--q", "13", "--h", "3", "--k", "1", "--family", "2", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn catalog_csv_header_and_rows() {
    let o = qmds(&["catalog", "--qmax", "7", "--format", "csv", "--trials", "2000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("q,family,case,h,r,k,n,nq_k,d,congruence_class,provenance")
    );
    assert!(out.contains("7,1,1,2,2,5,25,15,6,"));

    let o = qmds(&["catalog", "--qmax", "5", "--format", "json", "--trials", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(rows.as_array().unwrap().iter().all(|r| r["q"] == 5));
}

#[test]
fn table_budget_variable_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_qmds"))
        .args(["construct", "--q", "7", "--family", "1", "--h", "2", "--r", "2", "--k", "5"])
        .env("QMDS_TABLE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("budget"), "{}", stderr(&o));
}
