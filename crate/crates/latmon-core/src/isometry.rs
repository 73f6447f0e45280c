//! Isometries of lattices (column convention, `f(x) = M x`) and the
//! fingerprint of an isometry of `Λ` used to place it in the table.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cyclo;
use crate::discform::{self, FqmIsometry, TorsionQuadModule};
use crate::error::{Error, Result};
use crate::fixture::TableRow;
use crate::genus::{self, GenusSymbol};
use crate::lattice::{Lattice, Sublattice};
use crate::matrix::{self, Int, IntMatrix, Rat};
use crate::model::StandardLambdaModel;
use crate::walls::{self, WallWitness};

/// Largest order accepted before giving up.
pub const ORDER_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeIsometry {
    lattice: Lattice,
    matrix: IntMatrix,
}

/// Validates `m^T G m = G` and `det m = ±1`.
pub fn make_isometry(l: &Lattice, m: IntMatrix) -> Result<LatticeIsometry> {
    let n = l.rank();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.rows() });
    }
    if !matrix::det_int(&m).abs().is_one() {
        return Err(Error::NotUnimodular);
    }
    let mr = matrix::to_rat(&m);
    if &mr.transpose().mul(l.gram()).mul(&mr) != l.gram() {
        return Err(Error::NotAnIsometry);
    }
    Ok(LatticeIsometry { lattice: l.clone(), matrix: m })
}

fn mat_pow(m: &IntMatrix, mut e: u64) -> IntMatrix {
    let mut base = m.clone();
    let mut acc = IntMatrix::identity(m.rows());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

/// Multiplicative order of an integer matrix.
///
/// Exact: a finite order matrix has a characteristic polynomial made of
/// cyclotomic factors `Φ_m` and is semisimple, so its order is the lcm of
/// those `m`; the candidate is confirmed by one power.
pub fn matrix_order(m: &IntMatrix, cap: u64) -> Result<u64> {
    let factors = cyclo::cyclotomic_factors(&matrix::char_poly(m)).ok_or(Error::InfiniteOrder)?;
    let mut order = 1u64;
    for (k, _) in factors {
        order = order.lcm(&k);
        if order > cap {
            return Err(Error::OrderCapExceeded(cap));
        }
    }
    if mat_pow(m, order).is_identity() {
        Ok(order)
    } else {
        Err(Error::InfiniteOrder)
    }
}

impl LatticeIsometry {
    pub fn identity(l: &Lattice) -> Self {
        LatticeIsometry { lattice: l.clone(), matrix: IntMatrix::identity(l.rank()) }
    }

    pub fn minus_identity(l: &Lattice) -> Self {
        LatticeIsometry { lattice: l.clone(), matrix: IntMatrix::identity(l.rank()).scale(&Int::from(-1)) }
    }

    /// The reflection `R_v`; needs an integral reflection.
    pub fn reflection(l: &Lattice, v: &[Int]) -> Result<Self> {
        Ok(LatticeIsometry { lattice: l.clone(), matrix: l.reflection_matrix(v)? })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeIsometry) -> Result<LatticeIsometry> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        make_isometry(&self.lattice, self.matrix.mul(&other.matrix))
    }

    /// `G^-1 M^T G`, integral because `M` is unimodular.
    pub fn inverse(&self) -> LatticeIsometry {
        let g = self.lattice.gram();
        let gi = matrix::inverse(g).expect("nondegenerate");
        let inv = gi.mul(&matrix::to_rat(&self.matrix).transpose()).mul(g);
        let m = matrix::to_int(&inv).expect("inverse of an isometry is integral");
        LatticeIsometry { lattice: self.lattice.clone(), matrix: m }
    }

    /// `g ∘ self ∘ g^-1`.
    pub fn conjugate(&self, g: &LatticeIsometry) -> Result<LatticeIsometry> {
        g.compose(self)?.compose(&g.inverse())
    }

    pub fn pow(&self, e: u64) -> LatticeIsometry {
        LatticeIsometry { lattice: self.lattice.clone(), matrix: mat_pow(&self.matrix, e) }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn order(&self) -> Result<u64> {
        matrix_order(&self.matrix, ORDER_CAP)
    }

    /// `Λ^f`, the saturated kernel of `f - id`.
    pub fn invariant_lattice(&self) -> Sublattice {
        let mut a = self.matrix.clone();
        for i in 0..a.rows() {
            a[(i, i)] -= Int::one();
        }
        let k = matrix::integer_kernel(&a);
        Sublattice { ambient: self.lattice.clone(), basis: k, saturated: true }
    }

    /// `Λ_f = (Λ^f)^⊥`.
    pub fn coinvariant_lattice(&self) -> Result<Sublattice> {
        self.lattice.orthogonal_complement(&self.invariant_lattice().basis)
    }

    pub fn invariant_coinvariant(&self) -> Result<(Sublattice, Sublattice)> {
        Ok((self.invariant_lattice(), self.coinvariant_lattice()?))
    }

    /// Vectors `v_1, ..., v_k` with `f = R_{v_1} ∘ ... ∘ R_{v_k}` over `Q`.
    ///
    /// Works along an orthogonal basis `u_i`: once `u_1..u_{i-1}` are fixed,
    /// `τ(u_i)` is moved back onto `u_i` by `R_{τu_i - u_i}`, or by
    /// `R_{u_i} R_{τu_i + u_i}` when `τu_i - u_i` is isotropic. Both
    /// reflections fix the earlier `u_j`.
    pub fn reflection_decomposition(&self) -> Result<Vec<Vec<Rat>>> {
        let g = self.lattice.gram();
        let basis = matrix::orthogonal_basis(g).ok_or(Error::Degenerate)?;
        let m = matrix::to_rat(&self.matrix);
        let mut images: Vec<Vec<Rat>> = basis.iter().map(|u| m.mul_vec(u)).collect();
        let mut out = Vec::new();
        let reflect = |v: &[Rat], x: &mut Vec<Rat>| {
            let vv = g.bilinear(v, v);
            let c = Rat::from_integer(Int::from(2)) * g.bilinear(x, v) / vv;
            if !c.is_zero() {
                for (a, b) in x.iter_mut().zip(v) {
                    *a -= &c * b;
                }
            }
        };
        for i in 0..basis.len() {
            let u = &basis[i];
            if &images[i] == u {
                continue;
            }
            let w: Vec<Rat> = images[i].iter().zip(u).map(|(a, b)| a - b).collect();
            let steps: Vec<Vec<Rat>> = if !g.bilinear(&w, &w).is_zero() {
                vec![w]
            } else {
                let w2: Vec<Rat> = images[i].iter().zip(u).map(|(a, b)| a + b).collect();
                if g.bilinear(&w2, &w2).is_zero() {
                    return Err(Error::DecompositionFailed);
                }
                vec![w2, u.clone()]
            };
            for v in steps {
                for x in images.iter_mut().skip(i) {
                    reflect(&v, x);
                }
                out.push(v);
            }
            if &images[i] != u {
                return Err(Error::DecompositionFailed);
            }
        }
        if images != basis {
            return Err(Error::DecompositionFailed);
        }
        Ok(out)
    }

    /// Real spinor norm with respect to `-q` is positive. Reflections in
    /// negative vectors are in `O+`; reflections in positive ones are not.
    pub fn in_o_plus(&self) -> Result<bool> {
        let g = self.lattice.gram();
        let positive = self.reflection_decomposition()?.iter().filter(|v| g.bilinear(v, v).is_positive()).count();
        Ok(positive % 2 == 0)
    }

    pub fn disc_isometry(&self, t: &TorsionQuadModule) -> Result<FqmIsometry> {
        discform::induced_disc_isometry(t, &self.matrix)
    }

    /// Order of the induced isometry of the discriminant group.
    pub fn disc_order(&self) -> Result<u64> {
        let t = discform::discriminant_form(&self.lattice)?;
        Ok(self.disc_isometry(&t)?.order(&t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticStatus {
    pub in_o_plus: bool,
    pub coinv_neg_def: bool,
    pub symplectic: bool,
    pub regular: bool,
    /// all wall vectors of `Λ_f` (empty unless `Λ_f` is negative definite)
    pub witnesses: Vec<WallWitness>,
}

/// Symplectic iff `f ∈ O+`, `Λ_f` is negative definite and avoids the prime
/// exceptional vectors; regular iff it also avoids the other walls.
pub fn symplectic_status(model: &StandardLambdaModel, f: &LatticeIsometry) -> Result<SymplecticStatus> {
    let in_o_plus = f.in_o_plus()?;
    let co = f.coinvariant_lattice()?;
    let coinv_neg_def = co.rank() == 0 || co.lattice()?.is_negative_definite();
    let witnesses = if coinv_neg_def { walls::coinvariant_wall_scan(model, f, false)? } else { Vec::new() };
    let no_pex = !witnesses.iter().any(|w| w.wclass.is_pex());
    let symplectic = in_o_plus && coinv_neg_def && no_pex;
    let regular = symplectic && witnesses.is_empty();
    Ok(SymplecticStatus { in_o_plus, coinv_neg_def, symplectic, regular, witnesses })
}

/// The computed row of the table for one isometry of `Λ`.
#[derive(Clone, Debug, Serialize)]
pub struct IsometryReport {
    pub order: u64,
    pub disc_order: u64,
    pub inv_rank: usize,
    pub coinv_rank: usize,
    pub inv_genus: GenusSymbol,
    pub coinv_genus: Option<GenusSymbol>,
    pub in_o_plus: bool,
    pub coinv_neg_def: bool,
    pub symplectic: bool,
    pub regular: bool,
    pub exceptional: bool,
    /// divisibility in `Λ` of a generator of a rank one `Λ_f`
    pub coinv_generator_div: Option<i64>,
    pub witnesses: Vec<WallWitness>,
    pub type_letter: String,
    pub fixture_row: Option<u32>,
    /// symplectic but no table row has this fingerprint
    pub outside_table: bool,
}

fn genus_or_none(s: &Sublattice) -> Result<Option<GenusSymbol>> {
    if s.rank() == 0 {
        return Ok(None);
    }
    Ok(Some(genus::genus_symbol(&s.lattice()?)?))
}

fn genus_matches(computed: Option<&GenusSymbol>, printed: Option<&str>) -> bool {
    match (computed, printed) {
        (None, None) => true,
        (Some(g), Some(s)) => genus::parse(s).is_ok_and(|p| genus::genus_equal(g, &p)),
        _ => false,
    }
}

/// First table row whose order, discriminant order, genera and regular
/// flag agree with the report.
pub fn match_row<'a>(r: &IsometryReport, table: &'a [TableRow]) -> Option<&'a TableRow> {
    table.iter().find(|row| {
        row.ord_f == r.order
            && row.ord_df == r.disc_order
            && row.regular == r.regular
            && genus_matches(Some(&r.inv_genus), Some(row.inv_genus()))
            && genus_matches(r.coinv_genus.as_ref(), row.coinv_genus())
    })
}

fn d10_2_genus() -> GenusSymbol {
    let l = crate::named::build_named("D10(2)").expect("D10(2)");
    genus::genus_symbol(&l).expect("even lattice")
}

pub fn report(model: &StandardLambdaModel, f: &LatticeIsometry, table: Option<&[TableRow]>) -> Result<IsometryReport> {
    if f.lattice() != &model.lattice {
        return Err(Error::LatticeMismatch);
    }
    let order = f.order()?;
    let disc_order = f.disc_order()?;
    let (inv, co) = f.invariant_coinvariant()?;
    let inv_genus = genus::genus_symbol(&inv.lattice()?)?;
    let coinv_genus = genus_or_none(&co)?;
    let status = symplectic_status(model, f)?;
    let (exceptional, coinv_generator_div) = if co.rank() == 1 {
        let gram = co.gram();
        let gen = co.basis.row_vec(0);
        let div = model.lattice.divisibility(&gen)?.to_i64();
        (order == 2 && gram[(0, 0)] == Rat::from_integer(Int::from(-2)), div)
    } else {
        (false, None)
    };
    let mut rep = IsometryReport {
        order,
        disc_order,
        inv_rank: inv.rank(),
        coinv_rank: co.rank(),
        inv_genus,
        coinv_genus,
        in_o_plus: status.in_o_plus,
        coinv_neg_def: status.coinv_neg_def,
        symplectic: status.symplectic,
        regular: status.regular,
        exceptional,
        coinv_generator_div,
        witnesses: status.witnesses,
        type_letter: String::new(),
        fixture_row: None,
        outside_table: false,
    };
    let row = table.and_then(|t| match_row(&rep, t));
    rep.fixture_row = row.map(|r| r.no);
    rep.outside_table = table.is_some() && rep.symplectic && row.is_none();
    rep.type_letter = type_letter(&rep, row).to_owned();
    Ok(rep)
}

/// Type letter: (a) not regular, (e) involution with
/// coinvariant `D10(2)`, (d) order divisible by 5, then (b) standard or
/// (c) standard composed with an exceptional involution per the table.
pub fn type_letter(r: &IsometryReport, row: Option<&TableRow>) -> &'static str {
    if !r.symplectic {
        return "non-symplectic";
    }
    if !r.regular {
        return "a";
    }
    if r.order == 2 && r.coinv_genus.as_ref().is_some_and(|g| genus::genus_equal(g, &d10_2_genus())) {
        return "e";
    }
    if r.order.is_multiple_of(5) {
        return "d";
    }
    match row {
        Some(row) if row.is_standard() => "b",
        Some(row) if row.is_composed_with_iota() => "c",
        _ => "unknown",
    }
}

/// Contents of an isometry file.
///
/// `{"lattice": "Lambda" | <lattice expression> | <inline lattice>,
///   "matrix": [[..]], "row": n?, "convention": "column" | "row"?}`.
/// With the row convention the file holds `M^T`.
#[derive(Clone, Debug)]
pub struct IsometryFile {
    pub isometry: LatticeIsometry,
    /// row number claimed by the file, if any
    pub row: Option<u32>,
}

pub fn parse_isometry_file(text: &str, model: &StandardLambdaModel) -> Result<IsometryFile> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or_else(|| Error::InvalidArgument("isometry file must be an object".into()))?;
    let lattice = match obj.get("lattice") {
        None => model.lattice.clone(),
        Some(serde_json::Value::String(s)) if s == "Lambda" => model.lattice.clone(),
        Some(serde_json::Value::String(s)) => crate::named::build_named(s)?,
        Some(other) => Lattice::from_json_value(other.clone())?,
    };
    let rows =
        obj.get("matrix").and_then(|m| m.as_array()).ok_or_else(|| Error::InvalidArgument("missing matrix".into()))?;
    let rows: Vec<Vec<Int>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::InvalidArgument("matrix rows must be arrays".into()))?
                .iter()
                .map(crate::lattice::int_from_json)
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut m = IntMatrix::from_rows(rows).ok_or(Error::NotSquare)?;
    match obj.get("convention").and_then(|c| c.as_str()) {
        None | Some("column") => {}
        Some("row") => m = m.transpose(),
        Some(c) => return Err(Error::InvalidArgument(format!("unknown convention {c}"))),
    }
    let row = obj.get("row").and_then(|r| r.as_u64()).map(|r| r as u32);
    Ok(IsometryFile { isometry: make_isometry(&lattice, m)?, row })
}

pub fn load_isometry_file(path: &std::path::Path, model: &StandardLambdaModel) -> Result<IsometryFile> {
    parse_isometry_file(&std::fs::read_to_string(path)?, model)
}

/// JSON for an isometry of `Λ` in the column convention.
pub fn isometry_to_json(f: &LatticeIsometry, row: Option<u32>) -> String {
    let m: Vec<Vec<i64>> = f.matrix().to_rows().iter().map(|r| crate::lattice::coords_to_i64(r)).collect();
    let mut obj = serde_json::json!({ "lattice": "Lambda", "matrix": m });
    if let Some(r) = row {
        obj["row"] = serde_json::json!(r);
    }
    serde_json::to_string(&obj).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RatMatrix;

    fn ri(n: i64) -> Rat {
        Rat::from_integer(Int::from(n))
    }

    #[test]
    fn validation() {
        let m = StandardLambdaModel::new();
        assert!(make_isometry(&m.lattice, IntMatrix::identity(16)).is_ok());
        assert!(make_isometry(&m.lattice, m.exceptional_involution()).is_ok());
        let mut bad = IntMatrix::identity(16);
        bad[(0, 1)] = Int::one();
        assert!(matches!(make_isometry(&m.lattice, bad), Err(Error::NotAnIsometry)));
        let mut sing = IntMatrix::identity(16);
        sing[(0, 0)] = Int::from(2);
        assert!(matches!(make_isometry(&m.lattice, sing), Err(Error::NotUnimodular)));
    }

    #[test]
    fn orders() {
        let m = StandardLambdaModel::new();
        let l = &m.lattice;
        assert_eq!(LatticeIsometry::identity(l).order().unwrap(), 1);
        let iota = make_isometry(l, m.exceptional_involution()).unwrap();
        assert_eq!(iota.order().unwrap(), 2);
        // roots 1 and 3 are adjacent: the product of reflections has order 3
        let r1 = LatticeIsometry::reflection(l, &m.e8_root(1).coords).unwrap();
        let r3 = LatticeIsometry::reflection(l, &m.e8_root(3).coords).unwrap();
        assert_eq!(r1.compose(&r3).unwrap().order().unwrap(), 3);
        let shear = crate::matrix::int_matrix(&[&[1, 1], &[0, 1]]);
        assert!(matches!(matrix_order(&shear, ORDER_CAP), Err(Error::InfiniteOrder)));
        // -1 on A1^2 composed with the swap: order 2 exactly
        let a = IntMatrix::from_fn(2, 2, |i, j| if i != j { Int::from(-1) } else { Int::zero() });
        assert_eq!(matrix_order(&a, ORDER_CAP).unwrap(), 2);
    }

    #[test]
    fn group_operations() {
        let m = StandardLambdaModel::new();
        let l = &m.lattice;
        let r1 = LatticeIsometry::reflection(l, &m.e8_root(1).coords).unwrap();
        let r3 = LatticeIsometry::reflection(l, &m.e8_root(3).coords).unwrap();
        let f = r1.compose(&r3).unwrap();
        assert!(f.compose(&f.inverse()).unwrap().is_identity());
        let iota = make_isometry(l, m.exceptional_involution()).unwrap();
        assert!(iota.compose(&iota).unwrap().is_identity());
        // g R_v g^-1 = R_{g v}
        let conj = r1.conjugate(&f).unwrap();
        let gv = f.apply(&m.e8_root(1).coords);
        assert_eq!(conj, LatticeIsometry::reflection(l, &gv).unwrap());
    }

    #[test]
    fn decomposition_reproduces_the_map() {
        let m = StandardLambdaModel::new();
        let l = &m.lattice;
        let r1 = LatticeIsometry::reflection(l, &m.e8_root(1).coords).unwrap();
        let f = r1.compose(&make_isometry(l, m.a1_swap()).unwrap()).unwrap();
        for g in [f, LatticeIsometry::minus_identity(l), LatticeIsometry::identity(l)] {
            let vs = g.reflection_decomposition().unwrap();
            let n = l.rank();
            let mut acc = RatMatrix::identity(n);
            for v in &vs {
                let vv = l.gram().bilinear(v, v);
                let gv = l.gram().mul_vec(v);
                let r = RatMatrix::from_fn(n, n, |i, j| {
                    let id = if i == j { ri(1) } else { ri(0) };
                    id - ri(2) * &v[i] * &gv[j] / &vv
                });
                acc = acc.mul(&r);
            }
            assert_eq!(acc, matrix::to_rat(g.matrix()));
        }
    }

    #[test]
    fn spinor_anchors() {
        let m = StandardLambdaModel::new();
        let l = &m.lattice;
        assert!(LatticeIsometry::reflection(l, &m.e1().coords).unwrap().in_o_plus().unwrap());
        assert!(LatticeIsometry::reflection(l, &m.delta().coords).unwrap().in_o_plus().unwrap());
        assert!(!LatticeIsometry::minus_identity(l).in_o_plus().unwrap());
        assert!(LatticeIsometry::identity(l).in_o_plus().unwrap());
        // reflection in a positive vector e + f of U(2)
        let p = m.vector_expr("L(1)").unwrap();
        assert!(!LatticeIsometry::reflection(l, &p.coords).unwrap().in_o_plus().unwrap());
    }

    #[test]
    fn file_round_trip() {
        let m = StandardLambdaModel::new();
        let iota = make_isometry(&m.lattice, m.exceptional_involution()).unwrap();
        let text = isometry_to_json(&iota, Some(2));
        let back = parse_isometry_file(&text, &m).unwrap();
        assert_eq!(back.isometry, iota);
        assert_eq!(back.row, Some(2));
        let swap = r#"{"lattice": "U(2)", "matrix": [[0, 1], [1, 0]], "convention": "row"}"#;
        assert_eq!(parse_isometry_file(swap, &m).unwrap().isometry.order().unwrap(), 2);
        let bad = r#"{"lattice": "Lambda", "matrix": [[1]]}"#;
        assert!(matches!(parse_isometry_file(bad, &m), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn invariant_and_coinvariant() {
        let m = StandardLambdaModel::new();
        let l = &m.lattice;
        let iota = make_isometry(l, m.exceptional_involution()).unwrap();
        let (inv, co) = iota.invariant_coinvariant().unwrap();
        assert_eq!((inv.rank(), co.rank()), (15, 1));
        assert_eq!(co.gram()[(0, 0)], ri(-2));
        let id = LatticeIsometry::identity(l);
        assert_eq!(id.coinvariant_lattice().unwrap().rank(), 0);
        // -1 on the A1^2 block
        let mut a = IntMatrix::identity(16);
        a[(14, 14)] = Int::from(-1);
        a[(15, 15)] = Int::from(-1);
        let f = make_isometry(l, a).unwrap();
        let co = f.coinvariant_lattice().unwrap();
        assert_eq!(co.gram(), matrix::to_rat(&crate::matrix::int_matrix(&[&[-2, 0], &[0, -2]])));
    }

    #[test]
    fn reports_for_anchor_isometries() {
        let m = StandardLambdaModel::new();
        let table = crate::fixture::table1().unwrap();
        let iota = make_isometry(&m.lattice, m.exceptional_involution()).unwrap();
        let r = report(&m, &iota, Some(&table)).unwrap();
        assert_eq!((r.order, r.disc_order), (2, 1));
        assert!(r.symplectic && r.regular && r.exceptional);
        assert_eq!(r.inv_genus.to_string(), "II_(3,12)2^7_7");
        assert_eq!(r.coinv_genus.as_ref().unwrap().to_string(), "II_(0,1)2^1_7");
        assert_eq!((r.fixture_row, r.type_letter.as_str()), (Some(2), "c"));

        let id = report(&m, &LatticeIsometry::identity(&m.lattice), Some(&table)).unwrap();
        assert_eq!((id.fixture_row, id.type_letter.as_str()), (Some(1), "b"));
        assert!(id.coinv_genus.is_none() && !id.exceptional);

        let r_e1 = LatticeIsometry::reflection(&m.lattice, &m.e1().coords).unwrap();
        let st = symplectic_status(&m, &r_e1).unwrap();
        assert!(!st.symplectic && !st.regular);
        assert_eq!(st.witnesses.len(), 1);
        assert_eq!(st.witnesses[0].wclass, walls::WallClass::Pex2);
        assert_eq!(st.witnesses[0].vector, m.e1().to_i64());

        let mut a = IntMatrix::identity(16);
        a[(14, 14)] = Int::from(-1);
        a[(15, 15)] = Int::from(-1);
        let f = make_isometry(&m.lattice, a).unwrap();
        let st = symplectic_status(&m, &f).unwrap();
        assert!(st.in_o_plus && !st.symplectic);
        let pex4: Vec<_> = st.witnesses.iter().filter(|w| w.wclass == walls::WallClass::Pex4).collect();
        assert!(!pex4.is_empty());
        assert!(pex4.iter().all(|w| w.square == -4 && w.divisibility == 2));
        let rep = report(&m, &f, Some(&table)).unwrap();
        assert_eq!((rep.type_letter.as_str(), rep.fixture_row, rep.outside_table), ("non-symplectic", None, false));
    }
}
