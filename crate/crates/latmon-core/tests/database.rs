use std::path::PathBuf;

use latmon_core::fixture;
use latmon_core::isometry::{isometry_to_json, make_isometry, LatticeIsometry};
use latmon_core::verify;
use latmon_core::StandardLambdaModel;

fn scratch_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("latmon-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn partial_database() {
    let m = StandardLambdaModel::new();
    let dir = scratch_dir("db");
    let iota = make_isometry(&m.lattice, m.exceptional_involution()).unwrap();
    std::fs::write(dir.join("row02.json"), isometry_to_json(&iota, Some(2))).unwrap();
    std::fs::create_dir_all(dir.join("symplectic")).unwrap();
    let id = LatticeIsometry::identity(&m.lattice);
    std::fs::write(dir.join("symplectic/row01.json"), isometry_to_json(&id, None)).unwrap();
    std::fs::write(dir.join("notes.txt"), "ignored").unwrap();

    let table = fixture::table1().unwrap();
    let (v, results) = verify::verify_table(&dir, &table).unwrap();
    let rows: Vec<Option<u32>> = results.iter().map(|r| r.matched_row).collect();
    assert_eq!(rows, vec![Some(1), Some(2)]);
    assert!(results.iter().all(|r| r.pass));
    // only two classes present
    let classes = v.checks.iter().find(|c| c.name == "classes").unwrap();
    assert!(!classes.pass);
    assert_eq!(classes.detail, "2 rows represented, 2 regular");
    assert!(v.checks.iter().find(|c| c.name == "invariant genus determines fingerprint").unwrap().pass);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn corrupted_and_mislabelled_files() {
    let m = StandardLambdaModel::new();
    let dir = scratch_dir("bad");
    // breaks gram preservation
    let text = isometry_to_json(&LatticeIsometry::identity(&m.lattice), None).replacen("[1,0,", "[1,1,", 1);
    std::fs::write(dir.join("corrupt.json"), text).unwrap();
    let iota = make_isometry(&m.lattice, m.exceptional_involution()).unwrap();
    std::fs::write(dir.join("wrong_row.json"), isometry_to_json(&iota, Some(5))).unwrap();
    let a1 = {
        let mut a = latmon_core::matrix::IntMatrix::identity(16);
        a[(14, 14)] = latmon_core::matrix::Int::from(-1);
        a[(15, 15)] = latmon_core::matrix::Int::from(-1);
        make_isometry(&m.lattice, a).unwrap()
    };
    std::fs::write(dir.join("nonsymplectic.json"), isometry_to_json(&a1, None)).unwrap();
    std::fs::write(dir.join("garbage.json"), "{not json").unwrap();

    let table = fixture::table1().unwrap();
    let (v, results) = verify::verify_table(&dir, &table).unwrap();
    assert!(!v.passed());
    let by_name = |n: &str| results.iter().find(|r| r.file.ends_with(n)).unwrap();
    assert!(by_name("corrupt.json").detail.contains("rejected"));
    assert!(by_name("garbage.json").detail.contains("rejected"));
    assert!(by_name("wrong_row.json").detail.contains("file says row 5"));
    assert!(by_name("nonsymplectic.json").detail.contains("not symplectic"));
    assert!(results.iter().all(|r| !r.pass));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn empty_directory_is_an_error() {
    let dir = scratch_dir("empty");
    assert!(verify::verify_table(&dir, &fixture::table1().unwrap()).is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}
