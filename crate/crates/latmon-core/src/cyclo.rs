//! Cyclotomic polynomials, exact arithmetic in `Q(2cos(2π/p))` for small
//! primes, and the prime-order non-symplectic signature test.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::{self, Int, IntMatrix, Rat, RatMatrix};

/// Polynomials over `Z`, coefficients from the constant term up.
pub type Poly = Vec<Int>;

fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Division by a monic polynomial: `(quotient, remainder)`.
pub fn divrem_monic(a: &[Int], b: &[Int]) -> (Poly, Poly) {
    assert!(b.last().is_some_and(One::is_one), "divisor must be monic");
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![Int::zero()], r);
    }
    let mut q = vec![Int::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// The `m`-th cyclotomic polynomial.
pub fn cyclotomic(m: u64) -> Poly {
    assert!(m >= 1);
    // x^m - 1 divided by all Phi_d, d | m, d < m
    let mut p = vec![Int::zero(); m as usize + 1];
    p[0] = Int::from(-1);
    p[m as usize] = Int::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let (q, r) = divrem_monic(&p, &cyclotomic(d));
            debug_assert!(r.iter().all(Zero::is_zero));
            p = q;
        }
    }
    p
}

/// Multiplicities of cyclotomic factors of a monic polynomial, or `None`
/// when some factor is not cyclotomic.
pub fn cyclotomic_factors(f: &[Int]) -> Option<Vec<(u64, usize)>> {
    let mut rest: Poly = f.to_vec();
    trim(&mut rest);
    let deg = rest.len() - 1;
    let mut out = Vec::new();
    let mut m = 1u64;
    while rest.len() > 1 {
        // phi(m) >= sqrt(m/2), so indices beyond 2 deg^2 cannot occur
        if m > 2 * (deg as u64).pow(2) + 2 {
            return None;
        }
        if (euler_phi(m) as usize) < rest.len() {
            let c = cyclotomic(m);
            let mut k = 0;
            loop {
                let (q, r) = divrem_monic(&rest, &c);
                if !r.iter().all(Zero::is_zero) {
                    break;
                }
                rest = q;
                k += 1;
            }
            if k > 0 {
                out.push((m, k));
            }
        }
        m += 1;
    }
    rest[0].is_one().then_some(out)
}

// ---- the real subfield Q(2cos(2π/p)) ----

/// `Q(θ)` with `θ = 2cos(2πk/p)`, together with isolating intervals for
/// all real embeddings.
#[derive(Clone, Debug)]
pub struct RealCyclotomicField {
    pub p: u64,
    /// monic minimal polynomial of `θ`, constant term first
    minpoly: Vec<Rat>,
    /// `(k, lo, hi)` with `2cos(2πk/p)` the unique root in `[lo, hi]`
    roots: Vec<(u64, Rat, Rat)>,
}

pub type FieldElem = Vec<Rat>;

fn ri(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

fn eval_rat(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

impl RealCyclotomicField {
    pub fn new(p: u64) -> Result<Self> {
        let minpoly: Vec<Rat> = match p {
            2 => vec![ri(2), ri(1)],
            3 => vec![ri(1), ri(1)],
            5 => vec![ri(-1), ri(1), ri(1)],
            7 => vec![ri(-1), ri(-2), ri(1), ri(1)],
            _ => return Err(Error::UnsupportedPrime(p)),
        };
        let d = minpoly.len() as u64 - 1;
        let mut roots = Vec::new();
        for k in 1..=d {
            let v = 2.0 * (2.0 * std::f64::consts::PI * k as f64 / p as f64).cos();
            let eps = Rat::new(Int::one(), Int::from(1_000_000_000u64));
            let c = Rat::from_float(v).expect("finite");
            let (lo, hi) = (&c - &eps, &c + &eps);
            let (a, b) = (eval_rat(&minpoly, &lo), eval_rat(&minpoly, &hi));
            // roots are simple and far apart, so a sign change isolates one
            let (lo, hi) = if a.is_zero() {
                (lo.clone(), lo)
            } else if b.is_zero() {
                (hi.clone(), hi)
            } else {
                assert!(a.signum() != b.signum(), "root isolation failed");
                (lo, hi)
            };
            roots.push((k, lo, hi));
        }
        Ok(RealCyclotomicField { p, minpoly, roots })
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// The values `k` indexing the real embeddings `θ -> 2cos(2πk/p)`.
    pub fn embeddings(&self) -> Vec<u64> {
        self.roots.iter().map(|r| r.0).collect()
    }

    pub fn from_rat(&self, x: Rat) -> FieldElem {
        let mut v = vec![Rat::zero(); self.degree()];
        v[0] = x;
        v
    }

    pub fn theta(&self) -> FieldElem {
        let mut v = vec![Rat::zero(); self.degree()];
        if self.degree() == 1 {
            v[0] = -self.minpoly[0].clone();
        } else {
            v[1] = Rat::one();
        }
        v
    }

    pub fn add(&self, a: &[Rat], b: &[Rat]) -> FieldElem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[Rat], b: &[Rat]) -> FieldElem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn mul(&self, a: &[Rat], b: &[Rat]) -> FieldElem {
        let d = self.degree();
        let mut prod = vec![Rat::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        // reduce with the monic minimal polynomial
        for k in (d..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[k], Rat::zero());
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                prod[k - d + i] -= &c * &self.minpoly[i];
            }
        }
        prod.truncate(d);
        prod
    }

    pub fn is_zero(&self, a: &[Rat]) -> bool {
        a.iter().all(Zero::is_zero)
    }

    pub fn inv(&self, a: &[Rat]) -> Option<FieldElem> {
        // solve a * x = 1 through the multiplication matrix
        let d = self.degree();
        let cols: Vec<FieldElem> = (0..d)
            .map(|j| {
                let mut e = vec![Rat::zero(); d];
                e[j] = Rat::one();
                self.mul(a, &e)
            })
            .collect();
        let m = RatMatrix::from_fn(d, d, |i, j| cols[j][i].clone());
        let inv = matrix::inverse(&m)?;
        Some((0..d).map(|i| inv[(i, 0)].clone()).collect())
    }

    pub fn div(&self, a: &[Rat], b: &[Rat]) -> Option<FieldElem> {
        Some(self.mul(a, &self.inv(b)?))
    }

    fn refine(&self, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
        let mid = (lo + hi) / ri(2);
        let fl = eval_rat(&self.minpoly, lo);
        let fm = eval_rat(&self.minpoly, &mid);
        if fm.is_zero() {
            (mid.clone(), mid)
        } else if fm.signum() == fl.signum() {
            (mid, hi.clone())
        } else {
            (lo.clone(), mid)
        }
    }

    /// Sign of `a` under the embedding `θ -> 2cos(2πk/p)`.
    ///
    /// Exact: zero is decided in the field, and a nonzero value is
    /// separated from 0 by refining the isolating interval.
    pub fn sign_at(&self, a: &[Rat], k: u64) -> i32 {
        if self.is_zero(a) {
            return 0;
        }
        let (_, lo, hi) = self.roots.iter().find(|r| r.0 == k).expect("embedding index");
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        loop {
            let (vlo, vhi) = interval_eval(a, &lo, &hi);
            if vlo.is_positive() {
                return 1;
            }
            if vhi.is_negative() {
                return -1;
            }
            if lo == hi {
                // exact rational root: the value is exact too
                return if vlo.is_positive() { 1 } else { -1 };
            }
            (lo, hi) = self.refine(&lo, &hi);
        }
    }

    /// Signature `(pos, neg)` of a symmetric matrix over the field under
    /// the embedding `k`; `None` if degenerate.
    pub fn signature_at(&self, g: &[Vec<FieldElem>], k: u64) -> Option<(usize, usize)> {
        let n = g.len();
        let mut a: Vec<Vec<FieldElem>> = g.to_vec();
        let mut alive: Vec<usize> = (0..n).collect();
        let (mut pos, mut neg) = (0, 0);
        while !alive.is_empty() {
            let p = match alive.iter().copied().find(|&i| !self.is_zero(&a[i][i])) {
                Some(p) => p,
                None => {
                    let (i, j) = alive
                        .iter()
                        .flat_map(|&i| alive.iter().map(move |&j| (i, j)))
                        .find(|&(i, j)| i != j && !self.is_zero(&a[i][j]))?;
                    // e_i <- e_i + e_j
                    for r in 0..n {
                        a[i][r] = self.add(&a[i][r], &a[j][r]);
                    }
                    for r in 0..n {
                        a[r][i] = self.add(&a[r][i], &a[r][j]);
                    }
                    i
                }
            };
            let d = a[p][p].clone();
            match self.sign_at(&d, k) {
                1 => pos += 1,
                _ => neg += 1,
            }
            alive.retain(|&x| x != p);
            let dinv = self.inv(&d)?;
            for &i in &alive {
                if self.is_zero(&a[i][p]) {
                    continue;
                }
                let f = self.mul(&a[i][p], &dinv);
                for &j in &alive {
                    let t = self.mul(&f, &a[p][j]);
                    a[i][j] = self.sub(&a[i][j], &t);
                }
            }
            for &j in &alive {
                a[p][j] = self.from_rat(Rat::zero());
                a[j][p] = self.from_rat(Rat::zero());
            }
        }
        Some((pos, neg))
    }

    /// Basis of the right kernel of a matrix over the field.
    pub fn kernel(&self, m: &[Vec<FieldElem>]) -> Vec<Vec<FieldElem>> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut a: Vec<Vec<FieldElem>> = m.to_vec();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !self.is_zero(&a[i][c])) else { continue };
            a.swap(p, r);
            let inv = self.inv(&a[r][c]).expect("nonzero");
            for j in 0..cols {
                a[r][j] = self.mul(&a[r][j], &inv);
            }
            for i in 0..rows {
                if i != r && !self.is_zero(&a[i][c]) {
                    let f = a[i][c].clone();
                    for j in 0..cols {
                        let t = self.mul(&f, &a[r][j]);
                        a[i][j] = self.sub(&a[i][j], &t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows {
                break;
            }
        }
        let zero = self.from_rat(Rat::zero());
        let one = self.from_rat(Rat::one());
        (0..cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![zero.clone(); cols];
                v[free] = one.clone();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = self.sub(&zero, &a[i][free]);
                }
                v
            })
            .collect()
    }
}

fn imul(a: (&Rat, &Rat), b: (&Rat, &Rat)) -> (Rat, Rat) {
    let c = [a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1];
    let lo = c.iter().min().unwrap().clone();
    let hi = c.iter().max().unwrap().clone();
    (lo, hi)
}

/// Interval enclosure of `sum a_i x^i` for `x` in `[lo, hi]`.
fn interval_eval(a: &[Rat], lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mut acc = (Rat::zero(), Rat::zero());
    for c in a.iter().rev() {
        let (l, h) = imul((&acc.0, &acc.1), (lo, hi));
        acc = (l + c, h + c);
    }
    acc
}

// ---- the prime order test ----

/// Outcome of the signature test for an isometry of prime order `p`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PrimeCheck {
    pub p: u64,
    pub invariant_signature: (usize, usize),
    /// signature of `ker(f + f^-1 - 2cos(2πk/p))` for each `k`
    pub eigen_signatures: Vec<(u64, (usize, usize))>,
    pub invariant_ok: bool,
    /// the condition at `k = 1`
    pub eigen_ok: bool,
    pub holds: bool,
}

fn mat_pow_eq_identity(m: &IntMatrix, p: u64) -> bool {
    let mut acc = IntMatrix::identity(m.rows());
    for _ in 0..p {
        acc = m.mul(&acc);
    }
    acc.is_identity()
}

/// Tests whether `f` of prime order `p` has `Λ^f` of signature `(1, *)` and
/// `ker(f + f^-1 - 2cos(2π/p))` of signature `(2, *)`.
///
/// `m` is in the column convention and must preserve the gram of `l`.
pub fn nonsymplectic_prime_check(l: &Lattice, m: &IntMatrix, p: u64) -> Result<PrimeCheck> {
    let field = RealCyclotomicField::new(p)?;
    let n = l.rank();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.rows() });
    }
    if m.is_identity() || !mat_pow_eq_identity(m, p) {
        let order = crate::isometry::matrix_order(m, crate::isometry::ORDER_CAP).unwrap_or(0);
        return Err(Error::WrongOrder { order, p });
    }
    let g = l.gram().clone();
    // invariant part
    let mut fix = m.clone();
    for i in 0..n {
        fix[(i, i)] -= Int::one();
    }
    let inv_basis = matrix::integer_kernel(&fix);
    let invariant_signature = if inv_basis.rows() == 0 {
        (0, 0)
    } else {
        let b = matrix::to_rat(&inv_basis);
        let (pp, nn, _) = matrix::inertia(&b.mul(&g).mul(&b.transpose()));
        (pp, nn)
    };
    // f + f^-1 with f^-1 = f^(p-1)
    let mut finv = IntMatrix::identity(n);
    for _ in 0..p - 1 {
        finv = m.mul(&finv);
    }
    let a = m.add(&finv);
    let theta = field.theta();
    // the kernel over Q(θ) is shared by all embeddings; only signs differ
    let mk: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = field.from_rat(matrix::rat_int(&a[(i, j)]));
                    if i == j {
                        field.sub(&x, &theta)
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let ker = field.kernel(&mk);
    let gk: Vec<Vec<FieldElem>> = ker
        .iter()
        .map(|u| {
            ker.iter()
                .map(|v| {
                    let mut s = field.from_rat(Rat::zero());
                    for i in 0..n {
                        if field.is_zero(&u[i]) {
                            continue;
                        }
                        for j in 0..n {
                            if g[(i, j)].is_zero() || field.is_zero(&v[j]) {
                                continue;
                            }
                            let t = field.mul(&field.mul(&u[i], &field.from_rat(g[(i, j)].clone())), &v[j]);
                            s = field.add(&s, &t);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    let mut eigen_signatures = Vec::new();
    for k in field.embeddings() {
        let sig = field.signature_at(&gk, k).ok_or(Error::Degenerate)?;
        eigen_signatures.push((k, sig));
    }
    let invariant_ok = invariant_signature.0 == 1;
    let eigen_ok = eigen_signatures.iter().find(|e| e.0 == 1).is_some_and(|e| e.1 .0 == 2);
    Ok(PrimeCheck { p, invariant_signature, eigen_signatures, invariant_ok, eigen_ok, holds: invariant_ok && eigen_ok })
}

/// `Φ_p(f)` evaluated at an integer matrix.
pub fn cyclotomic_at(m: &IntMatrix, k: u64) -> IntMatrix {
    let c = cyclotomic(k);
    let n = m.rows();
    let mut acc = IntMatrix::zeros(n, n);
    for coef in c.iter().rev() {
        acc = m.mul(&acc);
        for i in 0..n {
            acc[(i, i)] += coef;
        }
    }
    acc
}

/// Signature of the rational form restricted to `ker Φ_k(f)`.
pub fn cyclotomic_part_signature(l: &Lattice, m: &IntMatrix, k: u64) -> (usize, usize) {
    let ker = matrix::integer_kernel(&cyclotomic_at(m, k));
    if ker.rows() == 0 {
        return (0, 0);
    }
    let b = matrix::to_rat(&ker);
    let (p, n, _) = matrix::inertia(&b.mul(l.gram()).mul(&b.transpose()));
    (p, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Poly {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic(2), ints(&[1, 1]));
        assert_eq!(cyclotomic(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), ints(&[1, 0, -1, 0, 1]));
        for m in 1..40 {
            assert_eq!(cyclotomic(m).len() as u64 - 1, euler_phi(m));
        }
    }

    #[test]
    fn factor_into_cyclotomics() {
        // (x-1)^2 (x^2+x+1)
        let f = ints(&[1, -1, -1, 1]);
        let g = {
            let a = ints(&[1, -2, 1]);
            let b = ints(&[1, 1, 1]);
            let mut out = vec![Int::zero(); 5];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        assert_eq!(cyclotomic_factors(&g), Some(vec![(1, 2), (3, 1)]));
        // x^3 - x^2 - x + 1 = (x-1)^2 (x+1)
        assert_eq!(cyclotomic_factors(&f), Some(vec![(1, 2), (2, 1)]));
        assert_eq!(cyclotomic_factors(&ints(&[-1, -1, 1])), None);
    }

    #[test]
    fn field_arithmetic_and_signs() {
        let k = RealCyclotomicField::new(5).unwrap();
        let t = k.theta();
        // θ^2 + θ - 1 = 0
        let v = k.add(&k.mul(&t, &t), &k.sub(&t, &k.from_rat(Rat::one())));
        assert!(k.is_zero(&v));
        assert_eq!(k.sign_at(&t, 1), 1);
        assert_eq!(k.sign_at(&t, 2), -1);
        let inv = k.inv(&t).unwrap();
        assert!(k.is_zero(&k.sub(&k.mul(&inv, &t), &k.from_rat(Rat::one()))));
        let k7 = RealCyclotomicField::new(7).unwrap();
        let t7 = k7.theta();
        let signs: Vec<i32> = k7.embeddings().iter().map(|&e| k7.sign_at(&t7, e)).collect();
        assert_eq!(signs, vec![1, -1, -1]);
        assert!(RealCyclotomicField::new(11).is_err());
    }
}
