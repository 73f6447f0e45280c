//! Short vectors of negative definite lattices and the wall divisor
//! predicates on `Λ`.
//!
//! Enumeration is Fincke-Pohst on `-gram` with an exact rational LDL
//! decomposition. Integer bounds per coordinate come from a float guess
//! that is then corrected with exact comparisons, so no vector is lost to
//! rounding.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::isometry::LatticeIsometry;
use crate::lattice::{coords_to_i64, Lattice};
use crate::matrix::{Int, Rat, RatMatrix};
use crate::model::StandardLambdaModel;

/// `Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2`.
struct Ldl {
    d: Vec<Rat>,
    mu: Vec<Vec<Rat>>,
}

fn ldl(q: &RatMatrix) -> Option<Ldl> {
    let n = q.rows();
    let mut a = q.clone();
    let mut d = Vec::with_capacity(n);
    let mut mu = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        let di = a[(i, i)].clone();
        if !di.is_positive() {
            return None;
        }
        for j in i + 1..n {
            mu[i][j] = &a[(i, j)] / &di;
        }
        for j in i + 1..n {
            for k in i + 1..n {
                let v = &a[(j, k)] - &di * &mu[i][j] * &mu[i][k];
                a[(j, k)] = v;
            }
        }
        d.push(di);
    }
    Some(Ldl { d, mu })
}

struct Search<'a> {
    ldl: &'a Ldl,
    bound: Rat,
    n: usize,
}

impl Search<'_> {
    fn center(&self, i: usize, x: &[i64]) -> Rat {
        let mut c = Rat::zero();
        for j in i + 1..self.n {
            if x[j] != 0 && !self.ldl.mu[i][j].is_zero() {
                c -= &self.ldl.mu[i][j] * Rat::from_integer(Int::from(x[j]));
            }
        }
        c
    }

    fn cost(&self, i: usize, k: i64, c: &Rat) -> Rat {
        let t = Rat::from_integer(Int::from(k)) - c;
        &self.ldl.d[i] * &t * &t
    }

    /// All integers `k` with `d_i (k - c)^2 <= budget`.
    fn range(&self, i: usize, c: &Rat, budget: &Rat) -> Option<(i64, i64)> {
        let fits = |k: i64| self.cost(i, k, c) <= *budget;
        let half = Rat::new(Int::one(), Int::from(2));
        let m = (c + half).floor().to_integer().to_i64().expect("coordinate fits i64");
        if !fits(m) {
            return None;
        }
        let s = (budget / &self.ldl.d[i]).to_f64().unwrap_or(0.0).max(0.0).sqrt();
        let cf = c.to_f64().unwrap_or(0.0);
        let mut hi = ((cf + s).floor() as i64).max(m);
        while hi > m && !fits(hi) {
            hi -= 1;
        }
        while fits(hi + 1) {
            hi += 1;
        }
        let mut lo = ((cf - s).ceil() as i64).min(m);
        while lo < m && !fits(lo) {
            lo += 1;
        }
        while fits(lo - 1) {
            lo -= 1;
        }
        Some((lo, hi))
    }

    /// Depth-first from level `i` down to 0. `leading_zero` is set while
    /// every coordinate fixed so far is 0; then only `x_i >= 0` is tried.
    fn dfs(&self, i: usize, x: &mut Vec<i64>, budget: Rat, leading_zero: bool, out: &mut Vec<(Vec<i64>, Rat)>) {
        let c = self.center(i, x);
        let Some((lo, hi)) = self.range(i, &c, &budget) else { return };
        let lo = if leading_zero { lo.max(0) } else { lo };
        for k in lo..=hi {
            x[i] = k;
            let rest = &budget - self.cost(i, k, &c);
            if i == 0 {
                if !(leading_zero && k == 0) {
                    out.push((x.clone(), &self.bound - &rest));
                }
            } else {
                self.dfs(i - 1, x, rest, leading_zero && k == 0, out);
            }
        }
        x[i] = 0;
    }
}

/// All `x != 0` with `0 < -x.x <= bound`, one per sign pair (first nonzero
/// coordinate positive), sorted lexicographically, with their squares.
pub fn short_vectors_upto(l: &Lattice, bound: u64) -> Result<Vec<(Vec<Int>, i64)>> {
    if !l.is_integral() {
        return Err(Error::NotIntegral);
    }
    let n = l.rank();
    if n == 0 || bound == 0 {
        return Ok(Vec::new());
    }
    // reverse coordinates so that x_0 is the first one fixed
    let q = RatMatrix::from_fn(n, n, |i, j| -l.gram()[(n - 1 - i, n - 1 - j)].clone());
    let ldl = ldl(&q).ok_or(Error::NotNegativeDefinite)?;
    let search = Search { ldl: &ldl, bound: Rat::from_integer(Int::from(bound)), n };
    let top = n - 1;
    let c = Rat::zero();
    let Some((_, hi)) = search.range(top, &c, &search.bound) else {
        return Ok(Vec::new());
    };
    let mut found: Vec<(Vec<i64>, Rat)> = (0..=hi)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut out = Vec::new();
            let mut x = vec![0i64; n];
            x[top] = k;
            let rest = &search.bound - search.cost(top, k, &c);
            if top == 0 {
                if k != 0 {
                    out.push((x.clone(), &search.bound - &rest));
                }
            } else {
                search.dfs(top - 1, &mut x, rest, k == 0, &mut out);
            }
            out
        })
        .collect();
    let mut res: Vec<(Vec<Int>, i64)> = found
        .drain(..)
        .map(|(x, norm)| {
            let coords: Vec<Int> = x.iter().rev().map(|&c| Int::from(c)).collect();
            let sq = -norm.to_integer().to_i64().expect("small norm");
            (coords, sq)
        })
        .collect();
    res.sort();
    Ok(res)
}

/// All `x` with `x.x = n` (`n < 0`), one per sign pair.
pub fn short_vectors(l: &Lattice, n: i64) -> Result<Vec<Vec<Int>>> {
    if n >= 0 {
        return Err(Error::InvalidArgument(format!("target square {n} must be negative")));
    }
    Ok(short_vectors_upto(l, n.unsigned_abs())?.into_iter().filter(|(_, s)| *s == n).map(|(x, _)| x).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WallClass {
    #[serde(rename = "PEX2")]
    Pex2,
    #[serde(rename = "PEX4")]
    Pex4,
    #[serde(rename = "WALL6")]
    Wall6,
    #[serde(rename = "WALL12")]
    Wall12,
}

impl WallClass {
    /// Whether the class belongs to the prime exceptional part.
    pub fn is_pex(self) -> bool {
        matches!(self, WallClass::Pex2 | WallClass::Pex4)
    }

    pub fn name(self) -> &'static str {
        match self {
            WallClass::Pex2 => "PEX2",
            WallClass::Pex4 => "PEX4",
            WallClass::Wall6 => "WALL6",
            WallClass::Wall12 => "WALL12",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallWitness {
    /// coordinates in the standard basis of `Λ`
    pub vector: Vec<i64>,
    pub square: i64,
    pub divisibility: i64,
    pub wclass: WallClass,
}

/// Classifies `x` against the prime exceptional and wall conditions.
pub fn wall_class(model: &StandardLambdaModel, x: &[Int]) -> Result<Option<WallWitness>> {
    let l = &model.lattice;
    l.check_dim(x.len())?;
    let div = l.divisibility(x)?;
    let sq = l.norm(x);
    if !sq.is_integer() {
        return Err(Error::NotIntegral);
    }
    let sq = sq.to_integer().to_i64().expect("small square");
    let div = div.to_i64().expect("small divisibility");
    // x_{U(2)^3} in 2 U(2)^3: the six block coordinates are even
    let u2_even = x[..crate::model::E8_START].iter().all(|c| (c % Int::from(2)).is_zero());
    let wclass = match (sq, div) {
        (-2, 1) => WallClass::Pex2,
        (-4, 2) => WallClass::Pex4,
        (-6, 2) => WallClass::Wall6,
        (-12, 2) if u2_even => WallClass::Wall12,
        _ => return Ok(None),
    };
    Ok(Some(WallWitness { vector: coords_to_i64(x), square: sq, divisibility: div, wclass }))
}

/// Wall vectors in the coinvariant lattice of `f`; empty iff `Λ_f` avoids
/// the (prime exceptional) wall set.
pub fn coinvariant_wall_scan(
    model: &StandardLambdaModel,
    f: &LatticeIsometry,
    pex_only: bool,
) -> Result<Vec<WallWitness>> {
    if f.lattice() != &model.lattice {
        return Err(Error::LatticeMismatch);
    }
    let co = f.coinvariant_lattice()?;
    if co.rank() == 0 {
        return Ok(Vec::new());
    }
    let lat = co.lattice()?;
    if !lat.is_negative_definite() {
        return Err(Error::NotNegativeDefinite);
    }
    let bound = if pex_only { 4 } else { 12 };
    let mut out = Vec::new();
    for (y, sq) in short_vectors_upto(&lat, bound)? {
        if !matches!(sq, -2 | -4 | -6 | -12) {
            continue;
        }
        let x = co.to_ambient(&y);
        if let Some(w) = wall_class(model, &x)? {
            if !pex_only || w.wclass.is_pex() {
                out.push(w);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::build_named;

    #[test]
    fn root_counts() {
        let e8 = build_named("E8").unwrap();
        assert_eq!(short_vectors(&e8, -2).unwrap().len(), 120);
        let d4 = build_named("D4").unwrap();
        assert_eq!(short_vectors(&d4, -2).unwrap().len(), 12);
        let a2 = build_named("A2").unwrap();
        assert_eq!(short_vectors(&a2, -2).unwrap().len(), 3);
        assert!(short_vectors(&build_named("D4(2)").unwrap(), -2).unwrap().is_empty());
    }

    #[test]
    fn representatives_are_normalized() {
        let e8 = build_named("E8").unwrap();
        let v = short_vectors(&e8, -4).unwrap();
        assert_eq!(v.len(), 2160 / 2);
        for x in &v {
            assert!(x.iter().find(|c| !c.is_zero()).unwrap().is_positive());
        }
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_indefinite() {
        assert!(short_vectors(&build_named("U").unwrap(), -2).is_err());
    }

    #[test]
    fn named_vector_classes() {
        let m = StandardLambdaModel::new();
        let class = |v: &crate::lattice::LatticeVector| wall_class(&m, &v.coords).unwrap().map(|w| w.wclass);
        assert_eq!(class(&m.delta()), Some(WallClass::Pex4));
        assert_eq!(class(&m.halfsum()), None);
        assert_eq!(class(&m.e1()), Some(WallClass::Pex2));
        // three orthogonal E8 roots: square -6 but divisibility 1
        let r = m.vector_expr("r(1) + r(2) + r(5)").unwrap();
        assert_eq!(r.square(), Rat::from_integer(Int::from(-6)));
        assert_eq!(class(&r), None);
    }

    #[test]
    fn wall12_needs_even_projection() {
        let m = StandardLambdaModel::new();
        // square -12, divisibility 2, odd U(2)^3 part
        let a = m.vector_expr("u(0) + u(1) + delta").unwrap();
        assert_eq!(a.square(), Rat::from_integer(Int::from(-12)));
        assert_eq!(a.divisibility().unwrap(), Int::from(2));
        assert_eq!(wall_class(&m, &a.coords).unwrap(), None);
        let w = m.vector_expr("delta + 2r(1)").unwrap();
        assert_eq!(w.square(), Rat::from_integer(Int::from(-12)));
        assert_eq!(w.divisibility().unwrap(), Int::from(2));
        assert_eq!(wall_class(&m, &w.coords).unwrap().unwrap().wclass, WallClass::Wall12);
    }
}
