use std::process::{Command, Output};

fn tcubic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcubic")).args(args).output().expect("run tcubic")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tables_markdown_cell() {
    let o = tcubic(&["tables", "--q", "7", "--format", "markdown"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let n3 = text.lines().find(|l| l.starts_with("| N3")).unwrap();
    assert_eq!(n3.split('|').nth(4).unwrap().trim(), "10/10");
}

#[test]
fn tables_q9_second_column() {
    let o = tcubic(&["tables", "--q", "9", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("1,2,10,10,")));
}

#[test]
fn tables_json_is_versioned() {
    let o = tcubic(&["tables", "--q", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["grid"].as_array().unwrap().len(), 25);
}

#[test]
fn non_prime_power_is_usage_error() {
    let o = tcubic(&["tables", "--q", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a prime power"));
}

#[test]
fn missing_field_is_usage_error() {
    assert_eq!(tcubic(&["tables"]).status.code(), Some(2));
    assert_eq!(tcubic(&["tables", "--q", "5", "--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn explicit_modulus() {
    let o = tcubic(&["tables", "--p", "2", "--e", "3", "--modulus", "1,0,1,1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let reducible = tcubic(&["tables", "--p", "2", "--e", "3", "--modulus", "1,1,1,1"]);
    assert_eq!(reducible.status.code(), Some(2));
}

#[test]
fn verify_all_passes_q5() {
    let o = tcubic(&["verify", "--q", "5", "--all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn verify_q8_includes_polarity() {
    let o = tcubic(&["verify", "--q", "8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let sections = v["sections"].as_array().unwrap();
    let pol = sections.iter().find(|s| s["name"] == "polarity").unwrap();
    assert!(pol["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true && c.get("skipped").is_none()));
    let designs = sections.iter().find(|s| s["name"] == "designs").unwrap();
    assert!(designs["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn verify_q9_skips_polarity() {
    let o = tcubic(&["verify", "--q", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("SKIP polarity: null polarity (characteristic 3)"));
}

#[test]
fn verify_suite_passes() {
    let o = tcubic(&["verify", "--suite", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).matches("## q = ").count(), 9);
}

#[test]
fn code_summaries() {
    let o = tcubic(&["code", "--q", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("[6,2,5]_5 R=3 mu=2 D=360 gamma=13/9≈1.4444\n"));
    let o = tcubic(&["code", "--q", "7"]);
    assert!(stdout(&o).lines().next().unwrap().ends_with("gamma=13/10=1.3"));
    assert_eq!(tcubic(&["code", "--q", "4"]).status.code(), Some(2));
}

#[test]
fn code_json_and_histogram() {
    let o = tcubic(&["code", "--q", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(
        (v["n"].as_u64(), v["k"].as_u64(), v["d"].as_u64(), v["R"].as_u64()),
        (Some(6), Some(2), Some(5), Some(3))
    );
    assert_eq!(v["gamma"]["num"], "13");
    assert_eq!(v["gamma"]["den"], "9");
    assert_eq!(v["A5"], 24);
    let h = tcubic(&["code", "--q", "5", "--histogram"]);
    assert_eq!(stdout(&h), "weight,count\n0,1\n1,24\n2,240\n3,360\n>3,0\n");
}

#[test]
fn dump_to_file_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("i21.csv");
    let o = tcubic(&["dump", "--q", "5", "--submatrix", "2", "1", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 31);
    let o = tcubic(&["dump", "--q", "5", "--submatrix", "6", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of range"));
    let o = tcubic(&["dump", "--q", "7", "--submatrix", "4", "4", "--cell-ceiling", "1000"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dump_q13_under_default_ceiling() {
    let o = tcubic(&["dump", "--q", "13", "--submatrix", "4", "4", "--format", "rle"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("I44 1092x1092\n"));
    assert_eq!(text.lines().count(), 2 + 1092);
}

#[test]
fn env_override_and_determinism() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_tcubic"))
            .args(["tables", "--format", "json"])
            .env("TCUBIC_Q", "8")
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["q"], 8);
}
