//! Discriminant forms `L^dual / L` with `q(y) = y.y mod 2Z`.
//!
//! Elements are coordinate tuples with respect to cyclic generators
//! `g_i` of orders `d_i > 1`. Index `i` of an element is its mixed radix
//! value with the first coordinate most significant, so index order is
//! lexicographic order of coordinate tuples.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::{self, Int, IntMatrix, Rat, RatMatrix};

/// Largest module on which group computations are attempted.
pub const DEFAULT_ELEMENT_CAP: usize = 1 << 10;

pub type Element = Vec<u64>;

/// Reduction data for modules coming from a lattice.
#[derive(Clone, Debug)]
struct Source {
    lattice: Lattice,
    v_inv: IntMatrix,
    /// all SNF invariants, including the 1s
    invariants: Vec<Int>,
    /// positions of the nontrivial invariants
    positions: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TorsionQuadModule {
    orders: Vec<u64>,
    /// `g_i . g_j` as rationals (only meaningful mod 1 off the diagonal and mod 2 on it)
    gram: RatMatrix,
    /// generators as dual vectors in lattice coordinates, when known
    gens: Option<Vec<Vec<Rat>>>,
    source: Option<Source>,
}

fn mod2(x: &Rat) -> Rat {
    let two = Rat::from_integer(Int::from(2));
    let k = (x / &two).floor();
    x - two * k
}

fn mod1(x: &Rat) -> Rat {
    x - x.floor()
}

impl TorsionQuadModule {
    /// Module with explicit generator orders and value matrix.
    pub fn new(orders: Vec<u64>, gram: RatMatrix) -> Result<Self> {
        if gram.rows() != orders.len() || !gram.is_symmetric() {
            return Err(Error::InvalidArgument("value matrix does not match the generators".into()));
        }
        if orders.iter().any(|&d| d < 2) {
            return Err(Error::InvalidArgument("generator orders must exceed 1".into()));
        }
        Ok(TorsionQuadModule { orders, gram, gens: None, source: None })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn is_two_elementary(&self) -> bool {
        self.orders.iter().all(|&d| d == 2)
    }

    pub fn generator_vectors(&self) -> Option<&[Vec<Rat>]> {
        self.gens.as_deref()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.orders.len()]
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Element {
        x.iter().zip(y).zip(&self.orders).map(|((a, b), d)| (a + b) % d).collect()
    }

    pub fn scale(&self, k: u64, x: &[u64]) -> Element {
        x.iter().zip(&self.orders).map(|(a, d)| (a % d) * (k % d) % d).collect()
    }

    pub fn index(&self, x: &[u64]) -> usize {
        let mut i = 0usize;
        for (a, d) in x.iter().zip(&self.orders) {
            i = i * (*d as usize) + (*a as usize);
        }
        i
    }

    pub fn element(&self, mut idx: usize) -> Element {
        let mut out = vec![0; self.orders.len()];
        for (k, d) in self.orders.iter().enumerate().rev() {
            out[k] = (idx % (*d as usize)) as u64;
            idx /= *d as usize;
        }
        out
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order() as usize).map(move |i| self.element(i))
    }

    /// `q(x)` in `[0, 2)`.
    pub fn q(&self, x: &[u64]) -> Rat {
        let n = self.orders.len();
        let mut s = Rat::zero();
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let xi = Rat::from_integer(Int::from(x[i]));
            s += &xi * &xi * &self.gram[(i, i)];
            for j in i + 1..n {
                if x[j] != 0 {
                    let xj = Rat::from_integer(Int::from(x[j]));
                    s += Rat::from_integer(Int::from(2)) * &xi * xj * &self.gram[(i, j)];
                }
            }
        }
        mod2(&s)
    }

    /// Bilinear form `x.y` in `[0, 1)`.
    pub fn bilinear(&self, x: &[u64], y: &[u64]) -> Rat {
        let xr: Vec<Rat> = x.iter().map(|&a| Rat::from_integer(Int::from(a))).collect();
        let yr: Vec<Rat> = y.iter().map(|&a| Rat::from_integer(Int::from(a))).collect();
        mod1(&self.gram.bilinear(&xr, &yr))
    }

    /// Polar form `b(x,y) = q(x+y) - q(x) - q(y) = 2 x.y` in `[0, 2)`.
    pub fn polar(&self, x: &[u64], y: &[u64]) -> Rat {
        mod2(&(Rat::from_integer(Int::from(2)) * self.bilinear(x, y)))
    }

    /// Class of a dual vector (lattice coordinates).
    pub fn element_of_dual_vector(&self, v: &[Rat]) -> Result<Element> {
        let src = self.source.as_ref().ok_or_else(|| Error::InvalidArgument("module has no lattice".into()))?;
        src.lattice.check_dim(v.len())?;
        let w = matrix::to_rat(&src.v_inv).mul_vec(v);
        let mut out = self.zero();
        for (k, &p) in src.positions.iter().enumerate() {
            let a = &w[p] * Rat::from_integer(src.invariants[p].clone());
            if !a.is_integer() {
                return Err(Error::InvalidArgument("vector is not in the dual lattice".into()));
            }
            let d = Int::from(self.orders[k]);
            out[k] = a.to_integer().mod_floor(&d).to_u64().unwrap();
        }
        for (p, inv) in src.invariants.iter().enumerate() {
            if inv.is_one() && !w[p].is_integer() {
                return Err(Error::InvalidArgument("vector is not in the dual lattice".into()));
            }
        }
        Ok(out)
    }

    /// A dual vector representing `x`.
    pub fn dual_vector(&self, x: &[u64]) -> Result<Vec<Rat>> {
        let gens = self.gens.as_ref().ok_or_else(|| Error::InvalidArgument("module has no lattice".into()))?;
        let n = gens.first().map_or(0, |g| g.len());
        let mut out = vec![Rat::zero(); n];
        for (a, g) in x.iter().zip(gens) {
            if *a == 0 {
                continue;
            }
            let ar = Rat::from_integer(Int::from(*a));
            for (o, gi) in out.iter_mut().zip(g) {
                *o += &ar * gi;
            }
        }
        Ok(out)
    }

    /// View as a quadratic space over F2; errors unless 2-elementary.
    pub fn f2(&self) -> Result<F2Form> {
        if !self.is_two_elementary() {
            return Err(Error::NotTwoElementary);
        }
        let k = self.orders.len();
        if k > 24 {
            return Err(Error::ModuleTooLarge(1 << 24));
        }
        let size = 1usize << k;
        let mut q2 = vec![0u8; size];
        for (i, slot) in q2.iter_mut().enumerate() {
            let x = self.element(i);
            let v = self.q(&x) * Rat::from_integer(Int::from(2));
            *slot = v.to_integer().to_u8().unwrap() % 4;
        }
        Ok(F2Form { dim: k, q2 })
    }
}

/// Discriminant module of an even lattice.
pub fn discriminant_form(l: &Lattice) -> Result<TorsionQuadModule> {
    if !l.is_even() {
        return Err(if l.is_integral() { Error::NotEven } else { Error::NotIntegral });
    }
    let g = l.int_gram()?;
    let n = g.rows();
    let snf = matrix::smith_normal_form(&g);
    let invariants: Vec<Int> = (0..n).map(|i| snf.d[(i, i)].clone()).collect();
    let positions: Vec<usize> = (0..n).filter(|&i| !invariants[i].is_one()).collect();
    let orders: Vec<u64> = positions.iter().map(|&p| invariants[p].to_u64().expect("small invariant")).collect();
    let gens: Vec<Vec<Rat>> = positions
        .iter()
        .map(|&p| {
            let d = Rat::from_integer(invariants[p].clone());
            snf.v.col_vec(p).iter().map(|x| matrix::rat_int(x) / &d).collect()
        })
        .collect();
    let k = positions.len();
    let gram = RatMatrix::from_fn(k, k, |i, j| {
        let v = l.inner_rat(&gens[i], &gens[j]);
        if i == j {
            mod2(&v)
        } else {
            mod1(&v)
        }
    });
    Ok(TorsionQuadModule {
        orders,
        gram,
        gens: Some(gens),
        source: Some(Source { lattice: l.clone(), v_inv: snf.v_inv, invariants, positions }),
    })
}

/// A 2-elementary module as a quadratic space over F2.
///
/// Elements are indices (bitmasks, first coordinate in the top bit).
/// `q2[x]` is `2 q(x) mod 4`, so `q(x) = q2[x] / 2`.
#[derive(Clone, Debug)]
pub struct F2Form {
    pub dim: usize,
    pub q2: Vec<u8>,
}

impl F2Form {
    pub fn size(&self) -> usize {
        self.q2.len()
    }

    /// Polar form `b(x,y)` in F2.
    pub fn b(&self, x: usize, y: usize) -> u8 {
        ((self.q2[x ^ y] as i32 + 8 - self.q2[x] as i32 - self.q2[y] as i32) % 4 / 2) as u8
    }

    /// Elements with `q = 1`.
    pub fn gamma(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.q2[x] == 2).collect()
    }

    /// Transvection `x -> x + b(u,x) u` as a permutation of elements.
    pub fn transvection_perm(&self, u: usize) -> Vec<usize> {
        (0..self.size()).map(|x| if self.b(u, x) == 1 { x ^ u } else { x }).collect()
    }

    /// Basis bitmask of the generator with coordinate `i`.
    pub fn basis(&self, i: usize) -> usize {
        1 << (self.dim - 1 - i)
    }
}

/// An automorphism of a finite quadratic module, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqmIsometry {
    pub images: Vec<Element>,
}

impl FqmIsometry {
    pub fn identity(t: &TorsionQuadModule) -> Self {
        FqmIsometry { images: (0..t.num_generators()).map(|i| t.generator(i)).collect() }
    }

    /// Validates that the map is well defined, bijective and preserves `q`.
    pub fn new(t: &TorsionQuadModule, images: Vec<Element>) -> Result<Self> {
        if images.len() != t.num_generators() || images.iter().any(|e| e.len() != t.num_generators()) {
            return Err(Error::ModuleMismatch);
        }
        let f = FqmIsometry { images };
        // well defined: d_i * image_i = 0
        for (i, d) in t.orders().iter().enumerate() {
            if t.scale(*d, &f.images[i]) != t.zero() {
                return Err(Error::NotAnIsometry);
            }
        }
        for i in 0..t.num_generators() {
            if t.q(&f.images[i]) != t.q(&t.generator(i)) {
                return Err(Error::NotAnIsometry);
            }
            for j in i + 1..t.num_generators() {
                if t.bilinear(&f.images[i], &f.images[j]) != t.bilinear(&t.generator(i), &t.generator(j)) {
                    return Err(Error::NotAnIsometry);
                }
            }
        }
        // q determines the bilinear form, whose nondegeneracy for lattice
        // modules forces injectivity; still check directly when small.
        if t.order() as usize <= 1 << 16 {
            let mut seen = vec![false; t.order() as usize];
            for x in t.elements() {
                let i = t.index(&f.apply(t, &x));
                if seen[i] {
                    return Err(Error::NotAnIsometry);
                }
                seen[i] = true;
            }
        }
        Ok(f)
    }

    pub fn apply(&self, t: &TorsionQuadModule, x: &[u64]) -> Element {
        let mut out = t.zero();
        for (a, img) in x.iter().zip(&self.images) {
            if *a != 0 {
                out = t.add(&out, &t.scale(*a, img));
            }
        }
        out
    }

    /// `self` after `other`.
    pub fn compose(&self, t: &TorsionQuadModule, other: &FqmIsometry) -> FqmIsometry {
        FqmIsometry { images: other.images.iter().map(|x| self.apply(t, x)).collect() }
    }

    pub fn is_identity(&self, t: &TorsionQuadModule) -> bool {
        *self == FqmIsometry::identity(t)
    }

    /// Permutation of element indices.
    pub fn perm(&self, t: &TorsionQuadModule) -> Vec<usize> {
        t.elements().map(|x| t.index(&self.apply(t, &x))).collect()
    }

    /// Multiplicative order.
    pub fn order(&self, t: &TorsionQuadModule) -> u64 {
        let mut g = self.clone();
        let mut k = 1;
        while !g.is_identity(t) {
            g = self.compose(t, &g);
            k += 1;
        }
        k
    }

    fn from_perm(t: &TorsionQuadModule, perm: &[usize]) -> FqmIsometry {
        FqmIsometry { images: (0..t.num_generators()).map(|i| t.element(perm[t.index(&t.generator(i))])).collect() }
    }
}

/// `T_u(x) = x + b(u,x) u` on a 2-elementary module.
#[derive(Clone, Debug)]
pub struct Transvection {
    pub u: Element,
    /// the linear map, valid for any `u`
    pub map: FqmIsometry,
    /// `q(u) = 1`, i.e. `T_u` preserves `q` (a reflection)
    pub preserves_q: bool,
}

impl Transvection {
    pub fn into_isometry(self) -> Option<FqmIsometry> {
        self.preserves_q.then_some(self.map)
    }
}

pub fn transvection(t: &TorsionQuadModule, u: &[u64]) -> Result<Transvection> {
    let f2 = t.f2()?;
    if u.len() != t.num_generators() {
        return Err(Error::ModuleMismatch);
    }
    let ui = t.index(u);
    let perm = f2.transvection_perm(ui);
    Ok(Transvection { u: u.to_vec(), map: FqmIsometry::from_perm(t, &perm), preserves_q: f2.q2[ui] == 2 })
}

/// `K = {x : q(x) in Z/2Z}` and its radical `R = K ∩ K^⊥`.
#[derive(Clone, Debug)]
pub struct KernelRadical {
    /// element indices of `K`, sorted
    pub kernel: Vec<usize>,
    /// element indices of `R`, sorted
    pub radical: Vec<usize>,
    pub dim_kernel: usize,
    pub dim_radical: usize,
    /// the nonzero radical element when `R = {0, r}` with `q(r) = 1`
    pub r: Option<usize>,
}

pub fn kernel_and_radical(t: &TorsionQuadModule) -> Result<KernelRadical> {
    let f2 = t.f2()?;
    let kernel: Vec<usize> = (0..f2.size()).filter(|&x| f2.q2[x] % 2 == 0).collect();
    let radical: Vec<usize> = kernel.iter().copied().filter(|&y| kernel.iter().all(|&x| f2.b(x, y) == 0)).collect();
    let log2 = |n: usize| n.trailing_zeros() as usize;
    let r = match radical.as_slice() {
        [0, r] if f2.q2[*r] == 2 => Some(*r),
        _ => None,
    };
    Ok(KernelRadical { dim_kernel: log2(kernel.len()), dim_radical: log2(radical.len()), kernel, radical, r })
}

/// Isometry of `D_L` induced by an isometry `m` of `L` (column convention).
/// The caller guarantees `m^T G m = G`.
pub fn induced_disc_isometry(t: &TorsionQuadModule, m: &IntMatrix) -> Result<FqmIsometry> {
    let gens = t.gens.as_ref().ok_or_else(|| Error::InvalidArgument("module has no lattice".into()))?;
    let mr = matrix::to_rat(m);
    let images = gens.iter().map(|g| t.element_of_dual_vector(&mr.mul_vec(g))).collect::<Result<Vec<_>>>()?;
    FqmIsometry::new(t, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::build_named;

    #[test]
    fn a1_module() {
        let t = discriminant_form(&build_named("A1").unwrap()).unwrap();
        assert_eq!(t.order(), 2);
        assert_eq!(t.q(&[1]), Rat::new(Int::from(3), Int::from(2)));
    }

    #[test]
    fn lambda_module_shape() {
        let t = discriminant_form(&build_named("U(2)^3 + E8 + A1^2").unwrap()).unwrap();
        assert_eq!(t.order(), 256);
        assert!(t.is_two_elementary());
        let kr = kernel_and_radical(&t).unwrap();
        assert_eq!(kr.dim_kernel, 7);
        assert_eq!(kr.dim_radical, 1);
        assert!(kr.r.is_some());
    }

    #[test]
    fn a1_squared_radical() {
        let t = discriminant_form(&build_named("A1^2").unwrap()).unwrap();
        let kr = kernel_and_radical(&t).unwrap();
        assert_eq!(kr.dim_kernel, 1);
        assert_eq!(kr.dim_radical, 1);
        let r = t.element(kr.r.unwrap());
        assert_eq!(t.q(&r), Rat::one());
    }

    #[test]
    fn transvection_flags() {
        let t = discriminant_form(&build_named("U(2) + A1^2").unwrap()).unwrap();
        let f2 = t.f2().unwrap();
        for u in 1..f2.size() {
            let tv = transvection(&t, &t.element(u)).unwrap();
            assert_eq!(tv.preserves_q, t.q(&t.element(u)) == Rat::one());
            if tv.preserves_q {
                assert!(FqmIsometry::new(&t, tv.map.images.clone()).is_ok());
                assert_eq!(tv.map.order(&t), 2);
            }
        }
    }

    #[test]
    fn non_two_elementary() {
        let t = discriminant_form(&build_named("A2").unwrap()).unwrap();
        assert_eq!(t.order(), 3);
        assert!(matches!(kernel_and_radical(&t), Err(Error::NotTwoElementary)));
        assert_eq!(t.q(&[1]), Rat::new(Int::from(4), Int::from(3)));
    }

    #[test]
    fn dual_vector_roundtrip() {
        let t = discriminant_form(&build_named("U(2) + D4 + A1").unwrap()).unwrap();
        for x in t.elements() {
            let v = t.dual_vector(&x).unwrap();
            assert_eq!(t.element_of_dual_vector(&v).unwrap(), x);
        }
    }
}
