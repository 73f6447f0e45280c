//! End-to-end checks: the genus table, the discriminant group, the orbit
//! table, the monodromy argument and an external database of isometries.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::discform::{self, Element, TorsionQuadModule};
use crate::error::{Error, Result};
use crate::fixture::{self, TableRow};
use crate::genus::{self, GenusSymbol};
use crate::group::{self, FiniteIsometryGroup};
use crate::isometry::{self, IsometryReport, LatticeIsometry};
use crate::matrix::{Int, Rat};
use crate::model::{StandardLambdaModel, E8_START, RANK};
use crate::named;

/// `|O(D_Λ)| = 2 · |O_7(2)|`.
pub const DISC_GROUP_ORDER: u128 = 2_903_040;
pub const SYMPLECTIC_ORDER: u128 = 1_451_520;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub title: String,
    pub checks: Vec<Check>,
    /// set when the input was absent and nothing was checked
    pub skipped: Option<String>,
}

impl Verification {
    fn new(title: &str) -> Self {
        Verification { title: title.to_owned(), checks: Vec::new(), skipped: None }
    }

    fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, pass, detail));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn summary(&self) -> String {
        if let Some(why) = &self.skipped {
            return format!("{}: SKIPPED ({why})", self.title);
        }
        let ok = self.checks.iter().filter(|c| c.pass).count();
        format!("{}: {}/{} checks pass", self.title, ok, self.checks.len())
    }
}

/// One printed genus string against the genus of an expression.
/// Returns (canonically equal, literally equal to the raw symbol, detail).
fn compare_printed(expr: &str, printed: &str) -> (bool, bool, String) {
    let l = match named::build_named(expr) {
        Ok(l) => l,
        Err(e) => return (false, false, format!("`{expr}` does not build: {e}")),
    };
    let (computed, raw) = match (genus::genus_symbol(&l), genus::genus_symbol_raw(&l)) {
        (Ok(c), Ok(r)) => (c, r),
        (Err(e), _) | (_, Err(e)) => return (false, false, format!("no genus for `{expr}`: {e}")),
    };
    let literal = genus::render(&raw) == printed;
    match genus::parse(printed) {
        Ok(p) if genus::genus_equal(&computed, &p) => (true, literal, format!("{printed} = {computed}")),
        Ok(p) => (false, literal, format!("printed {printed} (= {}) but computed {computed}", p.canonical())),
        Err(e) => (false, literal, format!("printed {printed} is not a valid symbol ({e}); computed {computed}")),
    }
}

/// Every row's invariant expression against its printed genus, and every
/// explicit coinvariant against its printed genus. A row carrying errata
/// fails on the printed string; the detail says whether the correction
/// matches.
pub fn verify_genus_table(rows: &[TableRow]) -> Verification {
    let mut v = Verification::new("genus table");
    let mut literal = 0;
    let mut compared = 0;
    for row in rows {
        let (ok, lit, mut detail) = compare_printed(&row.inv_lattice_expr, &row.inv_genus_str);
        compared += 1;
        literal += lit as usize;
        if !ok && row.inv_genus() != row.inv_genus_str {
            let (fix, _, _) = compare_printed(&row.inv_lattice_expr, row.inv_genus());
            detail.push_str(&format!(
                "; corrected {} {}",
                row.inv_genus(),
                if fix { "matches" } else { "does not match" }
            ));
        }
        v.push(format!("row {} inv", row.no), ok, detail);
        if let (Some(expr), Some(printed)) = (row.explicit_coinvariant(), row.coinv_genus_str.as_deref()) {
            let (ok, lit, detail) = compare_printed(expr, printed);
            compared += 1;
            literal += lit as usize;
            v.push(format!("row {} coinv", row.no), ok, detail);
        } else if let Some(printed) = row.coinv_genus_str.as_deref() {
            // genus-only row: the printed symbol must at least be valid
            let parsed = genus::parse(printed);
            v.push(
                format!("row {} coinv symbol", row.no),
                parsed.is_ok(),
                match parsed {
                    Ok(g) => format!("{printed} = {g}"),
                    Err(e) => format!("printed {printed} is not a valid symbol ({e})"),
                },
            );
        }
    }
    v.push(
        "literal raw matches",
        true,
        format!("{literal}/{compared} printed strings equal the uncanonicalized symbol"),
    );
    v
}

/// Discriminant form of `Λ`, its reflection group and the symplectic quotient.
pub fn verify_discgroup() -> Result<Verification> {
    let model = StandardLambdaModel::new();
    let mut v = Verification::new("discriminant group");
    let t = discform::discriminant_form(&model.lattice)?;
    v.push("order of D", t.order() == 256, format!("|D| = {}", t.order()));
    let kr = discform::kernel_and_radical(&t)?;
    v.push("dim K", kr.dim_kernel == 7, format!("dim K = {}", kr.dim_kernel));
    v.push("dim R", kr.dim_radical == 1, format!("dim R = {}", kr.dim_radical));
    let r = kr.r.map(|r| t.element(r));
    v.push(
        "q(r)",
        r.is_some(),
        match &r {
            Some(r) => format!("q(r) = {} mod 2", t.q(r)),
            None => "R is not {0, r} with q(r) = 1".into(),
        },
    );
    let delta = model.delta();
    let half: Vec<Rat> = delta.coords.iter().map(|c| Rat::new(c.clone(), Int::from(2))).collect();
    let r_from_delta = t.element_of_dual_vector(&half)?;
    v.push("r = delta/2", r.as_ref() == Some(&r_from_delta), format!("delta/2 = {r_from_delta:?}"));

    let g = group::full_reflection_group(&t)?;
    v.push("reflection group order", g.order() == DISC_GROUP_ORDER, format!("order {}", g.order()));
    let f2 = t.f2()?;
    let gamma = f2.gamma();
    let mut sizes: Vec<usize> = g.orbits_on(&gamma).iter().map(Vec::len).collect();
    sizes.sort_unstable();
    v.push(
        "orbits on Gamma",
        sizes == vec![1, gamma.len() - 1],
        format!("|Gamma| = {}, orbit sizes {sizes:?}", gamma.len()),
    );
    let swap = isometry::make_isometry(&model.lattice, model.a1_swap())?.disc_isometry(&t)?;
    let t_r = discform::transvection(&t, &r_from_delta)?.map;
    v.push("swap induces T_r", swap == t_r, format!("order of swap on D = {}", swap.order(&t)));
    v.push("T_r central", g.is_central(&t_r), "");
    let sq = group::symplectic_quotient(&g)?;
    let image = sq.image.order();
    v.push(
        "symplectic quotient",
        sq.dim == 6 && image == SYMPLECTIC_ORDER && sq.full_symplectic.order() == SYMPLECTIC_ORDER,
        format!("dim {}, image {image}, Sp {}", sq.dim, sq.full_symplectic.order()),
    );
    v.push("kernel to Sp", g.order() == 2 * image, format!("|kernel| = {}", g.order() / image.max(1)));
    Ok(v)
}

/// The orbit representatives reproduce their squares and divisibilities.
pub fn verify_orbits() -> Result<Verification> {
    let model = StandardLambdaModel::new();
    let mut v = Verification::new("orbit table");
    for row in fixture::orbit_table()? {
        let x = model.vector_expr(&row.vector_expr)?;
        let sq = x.square().to_integer().to_i64().unwrap_or(i64::MIN);
        let div = x.divisibility()?.to_i64().unwrap_or(0);
        v.push(
            format!("({}) {}", row.label, row.vector_expr),
            sq == row.square && div == row.div,
            format!("square {sq}, div {div}; expected {} {}", row.square, row.div),
        );
    }
    Ok(v)
}

/// `x ∈ Δ`: `x² = -2`, or `x² = -4` with divisibility 2.
pub fn in_delta(model: &StandardLambdaModel, x: &[Int]) -> Result<bool> {
    let sq = model.lattice.norm(x);
    let d = model.lattice.divisibility(x)?;
    Ok(sq == Rat::from_integer(Int::from(-2)) || (sq == Rat::from_integer(Int::from(-4)) && d == Int::from(2)))
}

/// A vector `x` with `x² = -4`, divisibility 2 and `x/2 + Λ = u`.
///
/// Fixes the class of `x` mod `2Λ` from a representative of `u`, sets the
/// `E8` part to 0 and searches the remaining coordinates in `{±1}` or
/// `{0, ±2}` by parity.
pub fn lift_to_delta(model: &StandardLambdaModel, t: &TorsionQuadModule, u: &Element) -> Result<Option<Vec<Int>>> {
    let dv = t.dual_vector(u)?;
    let two = Rat::from_integer(Int::from(2));
    let parity: Vec<bool> = dv.iter().map(|c| (c * &two).to_integer() % Int::from(2) != Int::from(0)).collect();
    let free: Vec<usize> = (0..RANK).filter(|&i| !(E8_START..E8_START + 8).contains(&i)).collect();
    let choices: Vec<Vec<i64>> = free.iter().map(|&i| if parity[i] { vec![-1, 1] } else { vec![0, 2, -2] }).collect();
    let mut idx = vec![0usize; free.len()];
    loop {
        let mut x = vec![Int::from(0); RANK];
        for (k, &i) in free.iter().enumerate() {
            x[i] = Int::from(choices[k][idx[k]]);
        }
        if model.lattice.norm(&x) == Rat::from_integer(Int::from(-4)) && model.lattice.divisibility(&x)? == Int::from(2)
        {
            let half: Vec<Rat> = x.iter().map(|c| Rat::new(c.clone(), Int::from(2))).collect();
            if &t.element_of_dual_vector(&half)? == u {
                return Ok(Some(x));
            }
        }
        // odometer
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(None);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Reflections in `Δ` are in `O+` and their images generate `O(D_Λ)`.
pub fn verify_monodromy() -> Result<Verification> {
    let model = StandardLambdaModel::new();
    let l = &model.lattice;
    let mut v = Verification::new("monodromy");
    let t = discform::discriminant_form(l)?;

    let mut all_plus = true;
    for row in fixture::orbit_table()? {
        let x = model.vector_expr(&row.vector_expr)?;
        let plus = LatticeIsometry::reflection(l, &x.coords)?.in_o_plus()?;
        all_plus &= plus;
        v.push(format!("R_v in O+ for ({})", row.label), plus, row.vector_expr.clone());
    }

    // lifting: every u in Gamma is x/2 for some x of square -4, divisibility 2
    let f2 = t.f2()?;
    let gamma = f2.gamma();
    let mut lifts = Vec::new();
    let mut missing = 0;
    for &u in &gamma {
        match lift_to_delta(&model, &t, &t.element(u))? {
            Some(x) => lifts.push(x),
            None => missing += 1,
        }
    }
    v.push("lifting", missing == 0, format!("{}/{} elements of Gamma lifted", lifts.len(), gamma.len()));
    for (name, x) in [("delta", model.delta()), ("sigma", model.sigma())] {
        let half: Vec<Rat> = x.coords.iter().map(|c| Rat::new(c.clone(), Int::from(2))).collect();
        let e = t.element_of_dual_vector(&half)?;
        v.push(format!("q({name}/2) = 1"), t.q(&e) == Rat::from_integer(Int::from(1)), format!("q = {}", t.q(&e)));
    }

    let mut sample: Vec<Vec<Int>> = Vec::new();
    for name in ["Lm", "delta", "sigma", "halfsum", "halfdiff", "e1", "u(0)", "u(1)", "u(2)"] {
        sample.push(model.named_vector(name)?.coords);
    }
    for k in 1..=8 {
        sample.push(model.e8_root(k).coords);
    }
    for row in fixture::orbit_table()? {
        sample.push(model.vector_expr(&row.vector_expr)?.coords);
    }
    sample.extend(lifts);
    sample.sort();
    sample.dedup();
    let checked: Vec<(bool, bool, Option<discform::FqmIsometry>)> = sample
        .par_iter()
        .map(|x| -> Result<_> {
            let delta_ok = in_delta(&model, x)?;
            let r = LatticeIsometry::reflection(l, x)?;
            Ok((delta_ok, r.in_o_plus()?, Some(r.disc_isometry(&t)?)))
        })
        .collect::<Result<_>>()?;
    let not_delta = checked.iter().filter(|c| !c.0).count();
    let not_plus = checked.iter().filter(|c| !c.1).count();
    all_plus &= not_plus == 0;
    v.push("sample in Delta", not_delta == 0, format!("{} vectors, {not_delta} outside Delta", sample.len()));
    v.push("sample reflections in O+", not_plus == 0, format!("{not_plus} outside O+"));
    let images: Vec<_> = checked.into_iter().filter_map(|c| c.2).collect();
    let g = FiniteIsometryGroup::new(&t, images)?;
    v.push("generated group", g.order() == DISC_GROUP_ORDER, format!("order {}", g.order()));

    let kr = discform::kernel_and_radical(&t)?;
    let r = kr.r.map(|r| t.element(r)).ok_or_else(|| Error::InvalidArgument("no radical element".into()))?;
    let t_r = discform::transvection(&t, &r)?.map;
    let r_delta = LatticeIsometry::reflection(l, &model.delta().coords)?.disc_isometry(&t)?;
    v.push("R_delta induces T_r", r_delta == t_r, "");
    v.push("all reflections in O+", all_plus, "");
    Ok(v)
}

/// Outcome for one isometry file.
#[derive(Clone, Debug, Serialize)]
pub struct FileResult {
    pub file: String,
    pub claimed_row: Option<u32>,
    pub matched_row: Option<u32>,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<IsometryReport>,
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d)? {
            let p = entry?.path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|e| e == "json") {
                out.push(p);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The part of a report that the table determines.
fn fingerprint(r: &IsometryReport) -> (u64, u64, Option<GenusSymbol>, bool) {
    (r.order, r.disc_order, r.coinv_genus.as_ref().map(GenusSymbol::canonical), r.regular)
}

fn check_file(model: &StandardLambdaModel, path: &Path, table: &[TableRow]) -> FileResult {
    let file = path.display().to_string();
    let fail = |claimed, detail: String| FileResult {
        file: file.clone(),
        claimed_row: claimed,
        matched_row: None,
        pass: false,
        detail,
        report: None,
    };
    let parsed = match isometry::load_isometry_file(path, model) {
        Ok(p) => p,
        Err(e) => return fail(None, format!("rejected: {e}")),
    };
    if parsed.isometry.lattice() != &model.lattice {
        return fail(parsed.row, "not an isometry of Lambda".into());
    }
    let rep = match isometry::report(model, &parsed.isometry, Some(table)) {
        Ok(r) => r,
        Err(e) => return fail(parsed.row, format!("report failed: {e}")),
    };
    let mut problems = Vec::new();
    if !rep.symplectic {
        problems.push("not symplectic".to_owned());
    }
    if rep.fixture_row.is_none() {
        problems.push("outside table".to_owned());
    }
    if let (Some(c), Some(m)) = (parsed.row, rep.fixture_row) {
        if c != m {
            problems.push(format!("file says row {c}"));
        }
    }
    if rep.disc_order < rep.order {
        let half = parsed.isometry.pow(rep.order / 2);
        let ok = rep.order == 2 * rep.disc_order && isometry::report(model, &half, None).is_ok_and(|h| h.exceptional);
        if !ok {
            problems.push("f^(m/2) is not an exceptional involution".into());
        }
    }
    FileResult {
        file,
        claimed_row: parsed.row,
        matched_row: rep.fixture_row,
        pass: problems.is_empty(),
        detail: problems.join("; "),
        report: Some(rep),
    }
}

/// All isometry files under `dir` against the table. Per-file work runs in
/// parallel; results are sorted by row, then file name.
pub fn verify_table(dir: &Path, table: &[TableRow]) -> Result<(Verification, Vec<FileResult>)> {
    let files = json_files(dir)?;
    if files.is_empty() {
        return Err(Error::InvalidArgument(format!("no .json files in {}", dir.display())));
    }
    let model = StandardLambdaModel::new();
    let mut results: Vec<FileResult> = files.par_iter().map(|p| check_file(&model, p, table)).collect();
    results.sort_by(|a, b| (a.matched_row.or(a.claimed_row), &a.file).cmp(&(b.matched_row.or(b.claimed_row), &b.file)));

    let mut v = Verification::new("isometry database");
    let bad = results.iter().filter(|r| !r.pass).count();
    v.push("files", bad == 0, format!("{} files, {bad} failing", results.len()));
    for r in results.iter().filter(|r| !r.pass) {
        v.push(r.file.clone(), false, r.detail.clone());
    }
    let rows: std::collections::BTreeSet<u32> =
        results.iter().filter(|r| r.pass).filter_map(|r| r.matched_row).collect();
    let regular = rows.iter().filter(|&&n| table[n as usize - 1].regular).count();
    v.push(
        "classes",
        rows.len() == table.len() && regular == fixture::TABLE_REGULAR_ROWS,
        format!("{} rows represented, {regular} regular", rows.len()),
    );
    let mut by_genus: BTreeMap<String, Vec<&IsometryReport>> = BTreeMap::new();
    for rep in results.iter().filter_map(|r| r.report.as_ref()).filter(|r| r.symplectic) {
        by_genus.entry(rep.inv_genus.canonical().to_string()).or_default().push(rep);
    }
    let clashes: Vec<&String> = by_genus
        .iter()
        .filter(|(_, reps)| reps.iter().any(|r| fingerprint(r) != fingerprint(reps[0])))
        .map(|(g, _)| g)
        .collect();
    v.push("invariant genus determines fingerprint", clashes.is_empty(), format!("{clashes:?}"));
    Ok((v, results))
}
