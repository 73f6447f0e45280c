//! Lattices given by a rational Gram matrix in a fixed basis.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, Int, IntMatrix, Matrix, Rat, RatMatrix};

/// A named run of consecutive basis vectors, e.g. one summand of a direct sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug)]
struct Inner {
    gram: RatMatrix,
    name: Option<String>,
    blocks: Vec<Block>,
    integral: bool,
    even: bool,
}

/// Nondegenerate symmetric bilinear lattice `(Z^n, G)`.
///
/// Cheap to clone. Two handles compare equal when their Gram matrices agree.
#[derive(Clone, Debug)]
pub struct Lattice(Arc<Inner>);

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.gram == other.0.gram
    }
}

impl Eq for Lattice {}

impl Lattice {
    /// Validates symmetry and nondegeneracy. Rank 0 is allowed.
    pub fn new(gram: RatMatrix) -> Result<Self> {
        Self::with_blocks(gram, None, Vec::new())
    }

    pub fn with_blocks(gram: RatMatrix, name: Option<String>, blocks: Vec<Block>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if gram.rows() > 0 && matrix::det(&gram).is_zero() {
            return Err(Error::Degenerate);
        }
        let n = gram.rows();
        let integral = (0..n).all(|i| (0..n).all(|j| gram[(i, j)].is_integer()));
        let even = integral && (0..n).all(|i| gram[(i, i)].to_integer().is_even());
        Ok(Lattice(Arc::new(Inner { gram, name, blocks, integral, even })))
    }

    pub fn from_int_gram(gram: &IntMatrix) -> Result<Self> {
        Self::new(matrix::to_rat(gram))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_int_gram(&matrix::int_matrix(rows))
    }

    pub fn named(self, name: impl Into<String>) -> Self {
        let i = &*self.0;
        Lattice(Arc::new(Inner {
            gram: i.gram.clone(),
            name: Some(name.into()),
            blocks: i.blocks.clone(),
            integral: i.integral,
            even: i.even,
        }))
    }

    pub fn rank(&self) -> usize {
        self.0.gram.rows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.0.gram
    }

    /// Gram matrix as integers; errors on non-integral lattices.
    pub fn int_gram(&self) -> Result<IntMatrix> {
        matrix::to_int(&self.0.gram).ok_or(Error::NotIntegral)
    }

    pub fn name(&self) -> Option<&str> {
        self.0.name.as_deref()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.0.blocks
    }

    pub fn is_integral(&self) -> bool {
        self.0.integral
    }

    pub fn is_even(&self) -> bool {
        self.0.even
    }

    pub fn det(&self) -> Rat {
        if self.rank() == 0 {
            return Rat::one();
        }
        matrix::det(&self.0.gram)
    }

    /// `(positive, negative)` index of inertia.
    pub fn signature(&self) -> (usize, usize) {
        let (p, n, z) = matrix::inertia(&self.0.gram);
        debug_assert_eq!(z, 0);
        (p, n)
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature().0 == 0
    }

    pub fn rescale(&self, m: &Rat) -> Result<Lattice> {
        if m.is_zero() {
            return Err(Error::InvalidArgument("rescaling by zero".into()));
        }
        Lattice::new(self.0.gram.scale(m))
    }

    /// The dual lattice in the dual basis, Gram `G^{-1}`.
    pub fn dual(&self) -> Lattice {
        let inv = matrix::inverse(&self.0.gram).expect("nondegenerate");
        Lattice::new(inv).expect("inverse of a nondegenerate symmetric matrix")
    }

    pub fn direct_sum(parts: &[Lattice]) -> Lattice {
        let grams: Vec<&RatMatrix> = parts.iter().map(|l| l.gram()).collect();
        let gram = RatMatrix::block_diag(&grams);
        let mut blocks = Vec::new();
        let mut start = 0;
        for (i, p) in parts.iter().enumerate() {
            let name = p.name().map(str::to_owned).unwrap_or_else(|| format!("L{i}"));
            blocks.push(Block { name, start, len: p.rank() });
            start += p.rank();
        }
        Lattice::with_blocks(gram, None, blocks).expect("direct sum of nondegenerate lattices")
    }

    pub fn inner(&self, x: &[Int], y: &[Int]) -> Rat {
        let xr: Vec<Rat> = x.iter().map(matrix::rat_int).collect();
        let yr: Vec<Rat> = y.iter().map(matrix::rat_int).collect();
        self.0.gram.bilinear(&xr, &yr)
    }

    pub fn inner_rat(&self, x: &[Rat], y: &[Rat]) -> Rat {
        self.0.gram.bilinear(x, y)
    }

    pub fn norm(&self, x: &[Int]) -> Rat {
        self.inner(x, x)
    }

    /// `G x`, the pairings of `x` with the basis.
    pub fn pairings(&self, x: &[Int]) -> Vec<Rat> {
        let xr: Vec<Rat> = x.iter().map(matrix::rat_int).collect();
        self.0.gram.mul_vec(&xr)
    }

    /// Positive generator of `x . L`. Errors on the zero vector and when the
    /// pairings are not integral.
    pub fn divisibility(&self, x: &[Int]) -> Result<Int> {
        self.check_dim(x.len())?;
        if x.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroVector);
        }
        let p = self.pairings(x);
        if p.iter().any(|v| !v.is_integer()) {
            return Err(Error::NotIntegral);
        }
        let ints: Vec<Int> = p.iter().map(|v| v.to_integer()).collect();
        Ok(matrix::gcd_all(ints.iter()))
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: n });
        }
        Ok(())
    }

    pub fn vector(&self, coords: Vec<Int>) -> Result<LatticeVector> {
        self.check_dim(coords.len())?;
        Ok(LatticeVector { lattice: self.clone(), coords })
    }

    pub fn vector_i64(&self, coords: &[i64]) -> Result<LatticeVector> {
        self.vector(coords.iter().map(|&c| Int::from(c)).collect())
    }

    /// Reflection matrix (column convention) `x -> x - 2 (x.v)/(v.v) v`.
    /// Errors when `v` is isotropic or the reflection is not integral.
    pub fn reflection_matrix(&self, v: &[Int]) -> Result<IntMatrix> {
        self.check_dim(v.len())?;
        let q = self.norm(v);
        if q.is_zero() {
            return Err(Error::Isotropic);
        }
        let gv = self.pairings(v);
        let n = self.rank();
        let two = Rat::from_integer(Int::from(2));
        let m = RatMatrix::from_fn(n, n, |i, j| {
            let id = if i == j { Rat::one() } else { Rat::zero() };
            id - &two * matrix::rat_int(&v[i]) * &gv[j] / &q
        });
        matrix::to_int(&m).ok_or(Error::NonIntegralReflection)
    }

    pub fn sublattice(&self, basis: IntMatrix) -> Result<Sublattice> {
        if basis.cols() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: basis.cols() });
        }
        if basis.rows() > 0 && matrix::rank(&matrix::to_rat(&basis)) != basis.rows() {
            return Err(Error::InvalidArgument("basis vectors are dependent".into()));
        }
        // saturated iff all elementary divisors of the basis are 1
        let saturated = basis.rows() == 0 || matrix::smith_normal_form(&basis).invariants().iter().all(|d| d.is_one());
        Ok(Sublattice { ambient: self.clone(), basis, saturated })
    }

    /// `{x in L : x . s = 0 for all s in S}`; always saturated.
    pub fn orthogonal_complement(&self, s: &IntMatrix) -> Result<Sublattice> {
        if s.cols() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: s.cols() });
        }
        let b = matrix::to_rat(s).mul(self.gram());
        let (_, bi) = matrix::clear_denominators(&b);
        let k = matrix::integer_kernel(&bi);
        Ok(Sublattice { ambient: self.clone(), basis: k, saturated: true })
    }

    /// Short human summary.
    pub fn describe(&self) -> String {
        let (p, n) = self.signature();
        format!(
            "{}rank {}, signature ({p},{n}), det {}, {}",
            self.name().map(|s| format!("{s}: ")).unwrap_or_default(),
            self.rank(),
            self.det(),
            if self.is_even() {
                "even"
            } else if self.is_integral() {
                "odd"
            } else {
                "non-integral"
            }
        )
    }
}

/// Integer coordinate vector in a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVector {
    pub lattice: Lattice,
    pub coords: Vec<Int>,
}

impl LatticeVector {
    pub fn inner(&self, other: &LatticeVector) -> Result<Rat> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(self.lattice.inner(&self.coords, &other.coords))
    }

    pub fn square(&self) -> Rat {
        self.lattice.norm(&self.coords)
    }

    pub fn divisibility(&self) -> Result<Int> {
        self.lattice.divisibility(&self.coords)
    }

    pub fn is_primitive(&self) -> bool {
        matrix::gcd_all(self.coords.iter()).is_one()
    }

    pub fn add(&self, other: &LatticeVector) -> Result<LatticeVector> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        let c = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(LatticeVector { lattice: self.lattice.clone(), coords: c })
    }

    pub fn scale(&self, k: &Int) -> LatticeVector {
        LatticeVector { lattice: self.lattice.clone(), coords: self.coords.iter().map(|a| a * k).collect() }
    }

    pub fn neg(&self) -> LatticeVector {
        self.scale(&Int::from(-1))
    }

    pub fn to_i64(&self) -> Vec<i64> {
        coords_to_i64(&self.coords)
    }
}

pub fn coords_to_i64(c: &[Int]) -> Vec<i64> {
    use num_traits::ToPrimitive;
    c.iter().map(|x| x.to_i64().expect("coordinate fits in i64")).collect()
}

/// Sublattice of an ambient lattice given by basis rows in ambient coordinates.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub ambient: Lattice,
    pub basis: IntMatrix,
    pub saturated: bool,
}

impl Sublattice {
    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn gram(&self) -> RatMatrix {
        let b = matrix::to_rat(&self.basis);
        b.mul(self.ambient.gram()).mul(&b.transpose())
    }

    /// The sublattice as a lattice in its own right.
    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(self.gram())
    }

    /// Ambient coordinates of `sum y_i b_i`.
    pub fn to_ambient(&self, y: &[Int]) -> Vec<Int> {
        let n = self.basis.cols();
        let mut out = vec![Int::zero(); n];
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += yi * &self.basis[(i, j)];
            }
        }
        out
    }

    pub fn saturation(&self) -> Sublattice {
        Sublattice { ambient: self.ambient.clone(), basis: matrix::saturate(&self.basis), saturated: true }
    }
}

// ---- file format ----

#[derive(Serialize, Deserialize)]
struct LatticeFile {
    #[serde(default)]
    name: Option<String>,
    gram: Vec<Vec<serde_json::Value>>,
    #[serde(default)]
    blocks: Vec<Block>,
}

fn parse_rat(v: &serde_json::Value) -> Result<Rat> {
    let bad = || Error::InvalidArgument(format!("bad gram entry {v}"));
    match v {
        serde_json::Value::Number(n) => {
            let i = n.as_i64().ok_or_else(bad)?;
            Ok(Rat::from_integer(Int::from(i)))
        }
        serde_json::Value::String(s) => {
            let s = s.trim();
            let r = match s.split_once('/') {
                Some((a, b)) => {
                    let a: Int = a.trim().parse().map_err(|_| bad())?;
                    let b: Int = b.trim().parse().map_err(|_| bad())?;
                    if b.is_zero() {
                        return Err(bad());
                    }
                    Rat::new(a, b)
                }
                None => Rat::from_integer(s.parse().map_err(|_| bad())?),
            };
            Ok(r)
        }
        _ => Err(bad()),
    }
}

impl Lattice {
    pub fn from_json(text: &str) -> Result<Lattice> {
        let f: LatticeFile = serde_json::from_str(text)?;
        Self::from_file(&f)
    }

    /// Same as `from_json` for an already parsed value.
    pub fn from_json_value(v: serde_json::Value) -> Result<Lattice> {
        let f: LatticeFile = serde_json::from_value(v)?;
        Self::from_file(&f)
    }

    fn from_file(f: &LatticeFile) -> Result<Lattice> {
        let rows: Vec<Vec<Rat>> =
            f.gram.iter().map(|r| r.iter().map(parse_rat).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        let gram = Matrix::from_rows(rows).ok_or(Error::NotSquare)?;
        let n = gram.rows();
        for b in &f.blocks {
            if b.start + b.len > n {
                return Err(Error::InvalidArgument(format!("block {} out of range", b.name)));
            }
        }
        Lattice::with_blocks(gram, f.name.clone(), f.blocks.clone())
    }

    pub fn to_json(&self) -> String {
        let gram = (0..self.rank())
            .map(|i| (0..self.rank()).map(|j| serde_json::Value::String(self.gram()[(i, j)].to_string())).collect())
            .collect();
        let f = LatticeFile { name: self.name().map(str::to_owned), gram, blocks: self.blocks().to_vec() };
        serde_json::to_string_pretty(&f).expect("serializable")
    }
}

pub fn int_from_json(v: &serde_json::Value) -> Result<Int> {
    match v {
        serde_json::Value::Number(n) => {
            n.as_i64().map(Int::from).ok_or_else(|| Error::InvalidArgument(format!("bad integer {v}")))
        }
        serde_json::Value::String(s) => {
            s.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad integer {s}")))
        }
        _ => Err(Error::InvalidArgument(format!("bad integer {v}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_plane() {
        let u = Lattice::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(u.signature(), (1, 1));
        assert!(u.is_even());
        assert_eq!(u.det(), Rat::from_integer(Int::from(-1)));
    }

    #[test]
    fn rejects_bad_grams() {
        assert!(matches!(Lattice::from_i64(&[&[0, 1], &[2, 0]]), Err(Error::NotSymmetric)));
        assert!(matches!(Lattice::from_i64(&[&[1, 1], &[1, 1]]), Err(Error::Degenerate)));
    }

    #[test]
    fn divisibility_in_u2() {
        let u2 = Lattice::from_i64(&[&[0, 2], &[2, 0]]).unwrap();
        let v = u2.vector_i64(&[1, -1]).unwrap();
        assert_eq!(v.square(), Rat::from_integer(Int::from(-4)));
        assert_eq!(v.divisibility().unwrap(), Int::from(2));
        assert!(matches!(u2.divisibility(&[Int::zero(), Int::zero()]), Err(Error::ZeroVector)));
    }

    #[test]
    fn json_roundtrip() {
        let l = Lattice::from_i64(&[&[-2, 1], &[1, -2]]).unwrap().named("A2");
        let back = Lattice::from_json(&l.to_json()).unwrap();
        assert_eq!(back, l);
        assert_eq!(back.name(), Some("A2"));
        let half = Lattice::from_json(r#"{"gram": [["1/2", 0], [0, "-3"]]}"#).unwrap();
        assert!(!half.is_integral());
    }

    #[test]
    fn orthogonal_complement_rank() {
        let l = Lattice::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]).unwrap();
        let s = crate::matrix::int_matrix(&[&[1, 1, 0]]);
        let c = l.orthogonal_complement(&s).unwrap();
        assert_eq!(c.rank(), 2);
        assert!(c.saturated);
    }
}
