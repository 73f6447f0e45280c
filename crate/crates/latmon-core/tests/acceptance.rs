//! One line per acceptance criterion, then the assertions.
//!
//! Criterion 1 is expected to report FAIL: one printed genus pair in the
//! table is not a valid symbol. The test asserts that this is the only
//! discrepancy; any other failure panics.

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use latmon_core::fixture;
use latmon_core::genus;
use latmon_core::isometry::{self, make_isometry, LatticeIsometry};
use latmon_core::matrix::{Int, IntMatrix, Rat};
use latmon_core::named::build_named;
use latmon_core::verify;
use latmon_core::walls::{self, WallClass};
use latmon_core::{Lattice, StandardLambdaModel};

#[derive(PartialEq)]
enum Status {
    Pass,
    Fail,
    Skip,
}

struct Outcome {
    status: Status,
    detail: String,
}

fn pass_if(ok: bool, detail: String) -> Outcome {
    Outcome { status: if ok { Status::Pass } else { Status::Fail }, detail }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let mut o = f();
    let el = t.elapsed();
    if o.status == Status::Pass && el > limit {
        o.status = Status::Fail;
        o.detail.push_str(&format!(" (too slow, limit {limit:?})"));
    }
    o.detail.push_str(&format!(" [{:.2}s]", el.as_secs_f64()));
    o
}

/// Rows whose printed strings are known to be broken.
const KNOWN_BAD: [&str; 2] = ["row 30 inv", "row 30 coinv symbol"];

fn criterion_1() -> Outcome {
    let v = verify::verify_genus_table(&fixture::table1().unwrap());
    let rows_ok = (1..=32).filter(|n| v.checks.iter().any(|c| c.name == format!("row {n} inv") && c.pass)).count();
    let coinv_ok = (2..=7).filter(|n| v.checks.iter().any(|c| c.name == format!("row {n} coinv") && c.pass)).count();
    let literal = v.checks.iter().find(|c| c.name == "literal raw matches").unwrap().detail.clone();
    let failures: Vec<String> = v.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
    pass_if(
        failures.is_empty(),
        format!("{rows_ok}/32 invariant genera, {coinv_ok}/6 coinvariants; {literal}; failures {failures:?}"),
    )
}

fn criterion_2() -> Outcome {
    let v = verify::verify_discgroup().unwrap();
    let get = |n: &str| v.checks.iter().find(|c| c.name == n).map(|c| c.detail.clone()).unwrap_or_default();
    pass_if(
        v.passed(),
        format!(
            "{}; {}; {}; {}; {}",
            get("order of D"),
            get("dim K"),
            get("dim R"),
            get("reflection group order"),
            get("orbits on Gamma")
        ),
    )
}

fn criterion_3() -> Outcome {
    let o = verify::verify_orbits().unwrap();
    let m = verify::verify_monodromy().unwrap();
    let get = |n: &str| m.checks.iter().find(|c| c.name == n).map(|c| format!("{n}: {}", c.detail)).unwrap_or_default();
    pass_if(
        o.passed() && m.passed(),
        format!(
            "{}; {}; {}; {}; R_delta induces T_r: {}",
            o.summary(),
            get("sample in Delta"),
            get("sample reflections in O+"),
            get("generated group"),
            m.checks.iter().any(|c| c.name == "R_delta induces T_r" && c.pass)
        ),
    )
}

fn criterion_4() -> Outcome {
    let m = StandardLambdaModel::new();
    let table = fixture::table1().unwrap();
    let iota = make_isometry(&m.lattice, m.exceptional_involution()).unwrap();
    let r = isometry::report(&m, &iota, Some(&table)).unwrap();
    let coinv = iota.coinvariant_lattice().unwrap().lattice().unwrap();
    let a1 = build_named("A1").unwrap();
    let inv = r.inv_genus.to_string();
    let co = r.coinv_genus.as_ref().map(|g| g.to_string()).unwrap_or_default();
    pass_if(
        r.order == 2
            && r.disc_order == 1
            && inv == "II_(3,12)2^7_7"
            && coinv.gram() == a1.gram()
            && co == "II_(0,1)2^1_7"
            && r.symplectic
            && r.regular
            && r.exceptional
            && r.fixture_row == Some(2),
        format!(
            "order {} ord(D_f) {} inv {inv} coinv {co} symplectic {} regular {} exceptional {} row {:?}",
            r.order, r.disc_order, r.symplectic, r.regular, r.exceptional, r.fixture_row
        ),
    )
}

fn criterion_5() -> Outcome {
    let m = StandardLambdaModel::new();
    let r = LatticeIsometry::reflection(&m.lattice, &m.e1().coords).unwrap();
    let s = isometry::symplectic_status(&m, &r).unwrap();
    let e1 = m.e1().to_i64();
    let minus: Vec<i64> = e1.iter().map(|x| -x).collect();
    let pex2 = s.witnesses.iter().any(|w| w.wclass == WallClass::Pex2 && (w.vector == e1 || w.vector == minus));

    let mut a = IntMatrix::identity(16);
    a[(14, 14)] = Int::from(-1);
    a[(15, 15)] = Int::from(-1);
    let f = make_isometry(&m.lattice, a).unwrap();
    let t = isometry::symplectic_status(&m, &f).unwrap();
    let pex4 = t.witnesses.iter().any(|w| w.wclass == WallClass::Pex4 && w.square == -4 && w.divisibility == 2);
    pass_if(
        !s.symplectic && pex2 && !t.symplectic && pex4,
        format!(
            "R_e1 symplectic {} ({} witnesses, PEX2 = ±e1: {pex2}); -1 on A1^2 symplectic {} (PEX4 square -4 div 2: {pex4})",
            s.symplectic,
            s.witnesses.len(),
            t.symplectic
        ),
    )
}

/// Every `x` with `0 < -x^T G x <= bound`, one per sign pair, by scanning
/// a box that contains the ellipsoid.
fn brute_force(l: &Lattice, bound: i64) -> Vec<Vec<i64>> {
    let n = l.rank();
    let g: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| num_traits::ToPrimitive::to_f64(&l.gram()[(i, j)]).unwrap()).collect()).collect();
    // |x_i| <= sqrt(bound * (Q^-1)_ii) for Q = -G
    let qi = latmon_core::matrix::inverse(&l.gram().scale(&Rat::from_integer(Int::from(-1)))).unwrap();
    let r: Vec<i64> = (0..n)
        .map(|i| (bound as f64 * num_traits::ToPrimitive::to_f64(&qi[(i, i)]).unwrap()).sqrt().floor() as i64 + 1)
        .collect();
    let mut out = Vec::new();
    let mut x: Vec<i64> = r.iter().map(|b| -b).collect();
    loop {
        let q: f64 = -(0..n).map(|i| (0..n).map(|j| x[i] as f64 * g[i][j] * x[j] as f64).sum::<f64>()).sum::<f64>();
        let q = q.round() as i64;
        let first = x.iter().find(|&&c| c != 0).copied().unwrap_or(0);
        if q > 0 && q <= bound && first > 0 {
            out.push(x.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                out.sort();
                return out;
            }
            x[k] += 1;
            if x[k] <= r[k] {
                break;
            }
            x[k] = -r[k];
            k += 1;
        }
    }
}

fn criterion_6() -> Outcome {
    let e8 = build_named("E8").unwrap();
    let roots = walls::short_vectors(&e8, -2).unwrap().len();
    let d4_2 = walls::short_vectors(&build_named("D4(2)").unwrap(), -2).unwrap().len();
    let mut agree = 0;
    let cases = ["A1", "A2", "A3", "D4", "A1^2 + A2", "D4(2)", "A2(3)", "A1 + A1(2) + A1(3)"];
    for c in cases {
        let l = build_named(c).unwrap();
        let mut fast: Vec<Vec<i64>> = walls::short_vectors_upto(&l, 12)
            .unwrap()
            .into_iter()
            .map(|(v, _)| v.iter().map(|x| num_traits::ToPrimitive::to_i64(x).unwrap()).collect())
            .collect();
        fast.sort();
        agree += (fast == brute_force(&l, 12)) as usize;
    }
    pass_if(
        roots == 120 && d4_2 == 0 && agree == cases.len(),
        format!("E8 -2: {roots} sign pairs; D4(2) -2: {d4_2}; box oracle agrees on {agree}/{} lattices", cases.len()),
    )
}

fn criterion_7() -> Outcome {
    let a = genus::genus_symbol(&build_named("U(2)^3 + E8 + A1").unwrap()).unwrap();
    let b = genus::genus_symbol(&build_named("U^3 + D8^v(2) + A1").unwrap()).unwrap();
    let (ra, rb) = (a.to_string(), b.to_string());
    pass_if(
        genus::genus_equal(&a, &b) && ra == "II_(3,12)2^7_7" && rb == ra,
        format!("equal {}; {ra} / {rb}", genus::genus_equal(&a, &b)),
    )
}

fn criterion_8() -> Outcome {
    let Some(dir) = std::env::var_os("LATMON_DB").map(PathBuf::from) else {
        return Outcome { status: Status::Skip, detail: "external data required (set LATMON_DB)".into() };
    };
    let table = fixture::table1().unwrap();
    match verify::verify_table(&dir, &table) {
        Ok((v, _)) => pass_if(
            v.passed(),
            v.checks.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect::<Vec<_>>().join("; "),
        ),
        Err(e) => pass_if(false, format!("{}: {e}", dir.display())),
    }
}

/// number, time limit, check
type Criterion = (u32, Duration, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        (1, Duration::from_secs(60), criterion_1),
        (2, Duration::from_secs(300), criterion_2),
        (3, Duration::from_secs(300), criterion_3),
        (4, Duration::from_secs(10), criterion_4),
        (5, Duration::from_secs(10), criterion_5),
        (6, Duration::from_secs(30), criterion_6),
        (7, Duration::from_secs(5), criterion_7),
        (8, Duration::from_secs(3600), criterion_8),
    ];
    let mut unexpected = Vec::new();
    for (n, limit, f) in criteria {
        let o = timed(limit, f);
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        // written past the test harness capture so the lines show in `cargo test` output
        writeln!(std::io::stderr(), "criterion {n}: {tag}: {}", o.detail).unwrap();
        if o.status == Status::Fail && n != 1 {
            unexpected.push(n);
        }
    }
    // criterion 1 may only fail on the known misprint
    let v = verify::verify_genus_table(&fixture::table1().unwrap());
    let failed: Vec<&str> = v.failures().map(|c| c.name.as_str()).collect();
    assert_eq!(failed, KNOWN_BAD, "unexpected genus table failures");
    assert!(
        v.checks.iter().find(|c| c.name == "row 30 inv").unwrap().detail.contains("corrected II_(3,1)2^28^2_2 matches"),
        "the corrected symbol should match"
    );
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
