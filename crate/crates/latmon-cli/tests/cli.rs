use std::path::PathBuf;
use std::process::{Command, Output};

fn latmon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latmon")).args(args).env_remove("LATMON_DB").output().unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn report_exceptional_matches_row_2() {
    let o = latmon(&["report", &data("exceptional.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["fixture_row"], 2);
    assert_eq!(v["order"], 2);
    assert_eq!(v["disc_order"], 1);
    assert_eq!(v["inv_genus"], "II_(3,12)2^7_7");
    assert_eq!(v["coinv_genus"], "II_(0,1)2^1_7");
    assert_eq!(v["type_letter"], "c");
    assert_eq!(v["exceptional"], true);
}

#[test]
fn walls_lists_pex4_witnesses() {
    let o = latmon(&["walls", &data("minus_a1_block.json"), "--pex-only", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    for w in lines {
        assert_eq!(w["wclass"], "PEX4");
        assert_eq!(w["square"], -4);
        assert_eq!(w["divisibility"], 2);
    }
}

#[test]
fn verify_commands_pass() {
    for (cmd, summary) in [
        ("verify-orbits", "orbit table: 6/6 checks pass"),
        ("verify-discgroup", "discriminant group:"),
        ("verify-monodromy", "monodromy:"),
    ] {
        let o = latmon(&[cmd]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stdout(&o));
        assert!(stdout(&o).lines().last().unwrap().starts_with(summary));
        assert!(!stdout(&o).contains("FAIL"));
    }
    let o = latmon(&["verify-discgroup"]);
    assert!(stdout(&o).contains("order 2903040"));
    assert!(stdout(&o).contains("orbit sizes [1, 63]"));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let a = latmon(&["verify-monodromy", "--format", "json", "--threads", "1"]);
    let b = latmon(&["verify-monodromy", "--format", "json", "--threads", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_genus_reports_the_misprint() {
    let o = latmon(&["verify-genus"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let fails: Vec<&str> =
        out.lines().filter(|l| l.starts_with("FAIL")).map(|l| l.split(':').next().unwrap()).collect();
    assert_eq!(fails.len(), 2, "{out}");
    assert!(fails.iter().all(|l| l.contains("row 30")));
}

#[test]
fn database_absent_is_skipped() {
    let o = latmon(&["verify-table"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("SKIPPED (external data required"));
}

#[test]
fn database_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_latmon"))
        .args(["verify-table", "--format", "json"])
        .env("LATMON_DB", data(""))
        .output()
        .unwrap();
    // the bundled samples cover two rows and include a non-symplectic map
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("\"matched_row\":2"));
    assert!(out.contains("not symplectic"));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(latmon(&["report", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(latmon(&["genus", "Q7"]).status.code(), Some(2));
    assert_eq!(latmon(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(latmon(&["verify-table", "/nonexistent-dir"]).status.code(), Some(2));
    assert_eq!(latmon(&["verify-genus", "--fixture", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn genus_and_disc() {
    let o = latmon(&["genus", "U^3 + D8^v(2) + A1"]);
    assert_eq!(stdout(&o).lines().next(), Some("II_(3,12)2^7_7"));
    let o = latmon(&["disc", "U(2)^3 + E8 + A1^2"]);
    assert!(stdout(&o).contains("order 256"));
    assert!(stdout(&o).contains("dim K = 7, dim R = 1"));
    let o = latmon(&["info", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["signature"], serde_json::json!([3, 13]));
}

#[test]
fn fixture_override() {
    let dir = std::env::temp_dir().join(format!("latmon-fixture-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.json");
    // the bundled table with row 30 corrected: every check passes
    let mut rows: Vec<serde_json::Value> =
        serde_json::from_str(include_str!("../../latmon-core/fixtures/table1.json")).unwrap();
    let errata = rows[29]["errata"].clone();
    rows[29]["inv_genus_str"] = errata["inv_genus_str"].clone();
    rows[29]["coinv_genus_str"] = errata["coinv_genus_str"].clone();
    std::fs::write(&path, serde_json::to_string(&rows).unwrap()).unwrap();
    let o = latmon(&["verify-genus", "--fixture", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}
