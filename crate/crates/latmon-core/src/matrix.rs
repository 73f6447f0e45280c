//! Dense matrices over exact rings, Smith normal form and integer kernels.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<Int>;
pub type RatMatrix = Matrix<Rat>;

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from rows; returns `None` when the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return None;
        }
        Some(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<T> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + PartialEq,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Block diagonal sum.
    pub fn block_diag(blocks: &[&Matrix<T>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let v = out[(i, j)].clone() + a.clone() * b.clone();
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix/vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s = s + a.clone() * b.clone();
                    }
                }
                s
            })
            .collect()
    }

    /// `v^T A w`.
    pub fn bilinear(&self, v: &[T], w: &[T]) -> T {
        let aw = self.mul_vec(w);
        let mut s = T::zero();
        for (a, b) in v.iter().zip(aw) {
            if !a.is_zero() {
                s = s + a.clone() * b;
            }
        }
        s
    }

    pub fn add(&self, other: &Matrix<T>) -> Matrix<T> {
        assert!(self.rows == other.rows && self.cols == other.cols);
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + other[(i, j)].clone())
    }

    pub fn scale(&self, c: &T) -> Matrix<T> {
        self.map(|x| x.clone() * c.clone())
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + PartialEq + std::ops::Sub<Output = T>,
{
    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        assert!(self.rows == other.rows && self.cols == other.cols);
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - other[(i, j)].clone())
    }
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: &Int) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).expect("ragged rows")
}

pub fn to_rat(m: &IntMatrix) -> RatMatrix {
    m.map(rat_int)
}

/// Integer matrix if every entry is integral.
pub fn to_int(m: &RatMatrix) -> Option<IntMatrix> {
    if m.data.iter().all(|x| x.is_integer()) {
        Some(m.map(|x| x.to_integer()))
    } else {
        None
    }
}

/// Clears denominators: returns `(c, c*m)` with `c` the least common denominator.
pub fn clear_denominators(m: &RatMatrix) -> (Int, IntMatrix) {
    let mut l = Int::one();
    for x in &m.data {
        l = l.lcm(x.denom());
    }
    let lr = rat_int(&l);
    (l, m.map(|x| (x * &lr).to_integer()))
}

/// Determinant by fraction-aware Gaussian elimination.
pub fn det(m: &RatMatrix) -> Rat {
    assert!(m.is_square());
    let n = m.rows;
    let mut a = m.clone();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap_rows(p, c);
            d = -d;
        }
        let piv = a[(c, c)].clone();
        d *= &piv;
        for r in c + 1..n {
            if a[(r, c)].is_zero() {
                continue;
            }
            let f = &a[(r, c)] / &piv;
            for k in c..n {
                let v = &a[(r, k)] - &f * &a[(c, k)];
                a[(r, k)] = v;
            }
        }
    }
    d
}

pub fn det_int(m: &IntMatrix) -> Int {
    det(&to_rat(m)).to_integer()
}

/// Inverse over the rationals.
pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    assert!(m.is_square());
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = RatMatrix::identity(n);
    for c in 0..n {
        let p = (c..n).find(|&r| !a[(r, c)].is_zero())?;
        a.swap_rows(p, c);
        inv.swap_rows(p, c);
        let piv = a[(c, c)].clone();
        for k in 0..n {
            a[(c, k)] = &a[(c, k)] / &piv;
            inv[(c, k)] = &inv[(c, k)] / &piv;
        }
        for r in 0..n {
            if r == c || a[(r, c)].is_zero() {
                continue;
            }
            let f = a[(r, c)].clone();
            for k in 0..n {
                let v = &a[(r, k)] - &f * &a[(c, k)];
                a[(r, k)] = v;
                let w = &inv[(r, k)] - &f * &inv[(c, k)];
                inv[(r, k)] = w;
            }
        }
    }
    Some(inv)
}

/// Rank over the rationals.
pub fn rank(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols {
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else { continue };
        a.swap_rows(p, r);
        let piv = a[(r, c)].clone();
        for i in r + 1..a.rows {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = &a[(i, c)] / &piv;
            for k in c..a.cols {
                let v = &a[(i, k)] - &f * &a[(r, k)];
                a[(i, k)] = v;
            }
        }
        r += 1;
    }
    r
}

/// Basis of the rational right kernel `{x : m x = 0}`, as rows.
pub fn rational_kernel(m: &RatMatrix) -> RatMatrix {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else { continue };
        a.swap_rows(p, r);
        let piv = a[(r, c)].clone();
        for k in 0..cols {
            a[(r, k)] = &a[(r, k)] / &piv;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for k in 0..cols {
                let v = &a[(i, k)] - &f * &a[(r, k)];
                a[(i, k)] = v;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut v = vec![Rat::zero(); cols];
        v[f] = Rat::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -a[(i, f)].clone();
        }
        out.push(v);
    }
    if out.is_empty() {
        Matrix { rows: 0, cols, data: vec![] }
    } else {
        Matrix::from_rows(out).unwrap()
    }
}

/// Smith normal form `u * a * v = d` with `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries, in order.
    pub fn invariants(&self) -> Vec<Int> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).take_while(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }
}

fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, c: &Int) {
    if c.is_zero() {
        return;
    }
    for k in 0..m.cols {
        let v = &m[(dst, k)] + c * &m[(src, k)];
        m[(dst, k)] = v;
    }
}

/// `(x, y, a/g, b/g)` with `x a + y b = g = gcd(a, b)`, preferring `y = 0`
/// when `a` divides `b`.
fn bezout(a: &Int, b: &Int) -> (Int, Int, Int, Int) {
    if b.is_multiple_of(a) {
        let s = if a.is_negative() { -Int::one() } else { Int::one() };
        let g = a.abs();
        return (s, Int::zero(), a / &g, b / &g);
    }
    let e = a.extended_gcd(b);
    (e.x, e.y, a / &e.gcd, b / &e.gcd)
}

/// `(r_s, r_t) <- (c0 r_s + c1 r_t, c2 r_s + c3 r_t)`
fn combine_rows(m: &mut IntMatrix, s: usize, t: usize, c: [&Int; 4]) {
    for k in 0..m.cols {
        let (p, q) = (m[(s, k)].clone(), m[(t, k)].clone());
        m[(s, k)] = c[0] * &p + c[1] * &q;
        m[(t, k)] = c[2] * &p + c[3] * &q;
    }
}

fn combine_cols(m: &mut IntMatrix, s: usize, t: usize, c: [&Int; 4]) {
    for k in 0..m.rows {
        let (p, q) = (m[(k, s)].clone(), m[(k, t)].clone());
        m[(k, s)] = c[0] * &p + c[1] * &q;
        m[(k, t)] = c[2] * &p + c[3] * &q;
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut vi = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[(i, j)].is_zero() && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);
        vi.swap_rows(t, bj);

        loop {
            let mut dirty = false;
            // Bezout steps keep the other entries from blowing up, unlike
            // repeated division with remainder
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let (x, y, a, b) = bezout(&d[(t, t)], &d[(i, t)]);
                combine_rows(&mut d, t, i, [&x, &y, &-&b, &a]);
                combine_rows(&mut u, t, i, [&x, &y, &-&b, &a]);
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let (x, y, a, b) = bezout(&d[(t, t)], &d[(t, j)]);
                combine_cols(&mut d, t, j, [&x, &y, &-&b, &a]);
                combine_cols(&mut v, t, j, [&x, &y, &-&b, &a]);
                // inverse of [[x, -b], [y, a]] acting on rows of v^-1
                combine_rows(&mut vi, t, j, [&a, &b, &-&y, &x]);
                dirty = true;
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let mut bad = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !d[(i, j)].is_multiple_of(&d[(t, t)]) {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let one = Int::one();
                    row_axpy(&mut d, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            for k in 0..n {
                d[(t, k)] = -d[(t, k)].clone();
            }
            for k in 0..m {
                u[(t, k)] = -u[(t, k)].clone();
            }
        }
    }
    Snf { d, u, v, v_inv: vi }
}

/// Basis (as rows) of the integer right kernel `{x in Z^n : a x = 0}`.
/// The result spans a saturated sublattice of `Z^n`.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let n = a.cols;
    if a.rows == 0 {
        return IntMatrix::identity(n);
    }
    let s = smith_normal_form(a);
    let r = s.rank();
    let cols: Vec<Vec<Int>> = (r..n).map(|j| s.v.col_vec(j)).collect();
    if cols.is_empty() {
        Matrix { rows: 0, cols: n, data: vec![] }
    } else {
        Matrix::from_rows(cols).unwrap()
    }
}

/// Saturation `(Q b) ∩ Z^n` of the row span of `b`.
pub fn saturate(b: &IntMatrix) -> IntMatrix {
    let k = integer_kernel(b);
    integer_kernel(&k)
}

pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a Int>) -> Int {
    xs.into_iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// `v` divided by the gcd of its entries, with the first nonzero entry positive.
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let g = gcd_all(v.iter());
    if g.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<Int> = v.iter().map(|x| x / &g).collect();
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in &mut out {
            *x = -x.clone();
        }
    }
    out
}

/// Sign and inertia of a symmetric rational matrix: `(positive, negative, zero)`.
///
/// Symmetric elimination; when every remaining diagonal entry vanishes a
/// basis change `e_i <- e_i + e_j` creates a nonzero pivot.
pub fn inertia(g: &RatMatrix) -> (usize, usize, usize) {
    assert!(g.is_square());
    let mut a = g.clone();
    let mut alive: Vec<usize> = (0..a.rows).collect();
    let (mut pos, mut neg) = (0, 0);
    while !alive.is_empty() {
        let piv = alive.iter().copied().find(|&i| !a[(i, i)].is_zero());
        let p = match piv {
            Some(p) => p,
            None => {
                let mut found = None;
                'o: for &i in &alive {
                    for &j in &alive {
                        if i != j && !a[(i, j)].is_zero() {
                            found = Some((i, j));
                            break 'o;
                        }
                    }
                }
                let Some((i, j)) = found else { break };
                // e_i <- e_i + e_j
                for k in 0..a.rows {
                    let v = &a[(i, k)] + &a[(j, k)];
                    a[(i, k)] = v;
                }
                for k in 0..a.rows {
                    let v = &a[(k, i)] + &a[(k, j)];
                    a[(k, i)] = v;
                }
                i
            }
        };
        let d = a[(p, p)].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        alive.retain(|&x| x != p);
        for &i in &alive {
            if a[(i, p)].is_zero() {
                continue;
            }
            let f = &a[(i, p)] / &d;
            for &j in &alive {
                let v = &a[(i, j)] - &f * &a[(p, j)];
                a[(i, j)] = v;
            }
            a[(i, p)] = Rat::zero();
        }
        for &j in &alive {
            a[(p, j)] = Rat::zero();
        }
    }
    let zero = g.rows - pos - neg;
    (pos, neg, zero)
}

/// Pairwise orthogonal anisotropic vectors spanning the space of a
/// nondegenerate symmetric form (rows, in the original coordinates).
/// Returns `None` for degenerate forms.
pub fn orthogonal_basis(g: &RatMatrix) -> Option<Vec<Vec<Rat>>> {
    assert!(g.is_square());
    let n = g.rows;
    let form = |x: &[Rat], y: &[Rat]| g.bilinear(x, y);
    let mut work: Vec<Vec<Rat>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
    let mut out = Vec::with_capacity(n);
    while !work.is_empty() {
        let k = match work.iter().position(|w| !form(w, w).is_zero()) {
            Some(k) => k,
            None => {
                // all isotropic: w_i + w_j is anisotropic when w_i . w_j != 0
                let (i, j) = (0..work.len())
                    .flat_map(|i| (0..work.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && !form(&work[i], &work[j]).is_zero())?;
                let s: Vec<Rat> = work[i].iter().zip(&work[j]).map(|(a, b)| a + b).collect();
                work[i] = s;
                i
            }
        };
        let w = work.swap_remove(k);
        let ww = form(&w, &w);
        for v in &mut work {
            let c = form(v, &w) / &ww;
            if !c.is_zero() {
                for (a, b) in v.iter_mut().zip(&w) {
                    *a -= &c * b;
                }
            }
        }
        out.push(w);
    }
    Some(out)
}

/// Characteristic polynomial `det(x I - m)`, coefficients from the constant
/// term up (Faddeev-LeVerrier; all divisions are exact).
pub fn char_poly(m: &IntMatrix) -> Vec<Int> {
    assert!(m.is_square());
    let n = m.rows;
    let mut c = vec![Int::zero(); n + 1];
    c[n] = Int::one();
    let mut acc = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // acc <- m * acc + c[n-k+1] I
        let mut next = m.mul(&acc);
        for i in 0..n {
            next[(i, i)] += &c[n - k + 1];
        }
        acc = next;
        let prod = m.mul(&acc);
        let tr: Int = (0..n).map(|i| prod[(i, i)].clone()).sum();
        c[n - k] = -(tr / Int::from(k));
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IntMatrix) {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert!(s.v.mul(&s.v_inv).is_identity());
        assert!(det_int(&s.u).abs().is_one());
        let inv = s.invariants();
        for w in inv.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn snf_of_u2() {
        let a = int_matrix(&[&[0, 2], &[2, 0]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.invariants(), vec![int(2), int(2)]);
        check_snf(&a);
    }

    #[test]
    fn snf_mixed() {
        check_snf(&int_matrix(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        let s = smith_normal_form(&int_matrix(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.invariants(), vec![int(2), int(6), int(12)]);
        check_snf(&int_matrix(&[&[1, 2, 3, 4], &[2, 4, 6, 8]]));
    }

    #[test]
    fn snf_entries_stay_small() {
        // Φ_3 of a conjugated order-3 isometry; plain division with
        // remainder pushed entries past 10^4 bits on this one
        let rows: [[i64; 16]; 16] = [
            [51, 48, 0, 0, 0, 0, -18, -48, -18, 42, 0, 0, 0, 0, 24, 24],
            [48, 51, 0, 0, 0, 0, -18, -48, -18, 42, 0, 0, 0, 0, 24, 24],
            [0, 0, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            [36, 36, 0, 0, 0, 0, -12, -36, -12, 31, 0, 0, 0, 0, 18, 18],
            [48, 48, 0, 0, 0, 0, -18, -45, -18, 42, 0, 0, 0, 0, 24, 24],
            [36, 36, 0, 0, 0, 0, -12, -36, -12, 32, 0, 0, 0, 0, 18, 18],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 3, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3, 0, 0],
            [-24, -24, 0, 0, 0, 0, 9, 24, 9, -21, 0, 0, 0, 0, -9, -12],
            [-24, -24, 0, 0, 0, 0, 9, 24, 9, -21, 0, 0, 0, 0, -12, -9],
        ];
        let r: Vec<&[i64]> = rows.iter().map(|r| &r[..]).collect();
        let a = int_matrix(&r);
        check_snf(&a);
        let s = smith_normal_form(&a);
        assert_eq!(s.rank(), 14);
        assert!(s.v.data.iter().all(|x| x.bits() < 64));
        let k = integer_kernel(&a);
        assert_eq!(k.rows(), 2);
        for i in 0..2 {
            assert!(a.mul_vec(k.row(i)).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn kernel_and_saturation() {
        let a = int_matrix(&[&[1, 1, 0], &[0, 0, 0]]);
        let k = integer_kernel(&a);
        assert_eq!(k.rows(), 2);
        for i in 0..k.rows() {
            assert!(a.mul_vec(k.row(i)).iter().all(|x| x.is_zero()));
        }
        let b = int_matrix(&[&[2, 0], &[0, 4]]);
        let s = saturate(&b);
        assert_eq!(det_int(&s).abs(), int(1));
        let c = int_matrix(&[&[2, 2, 0]]);
        assert_eq!(primitive(saturate(&c).row(0)), vec![int(1), int(1), int(0)]);
    }

    #[test]
    fn inertia_hyperbolic() {
        assert_eq!(inertia(&to_rat(&int_matrix(&[&[0, 1], &[1, 0]]))), (1, 1, 0));
        assert_eq!(inertia(&to_rat(&int_matrix(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]))), (1, 1, 1));
        assert_eq!(inertia(&to_rat(&int_matrix(&[&[-2, 1], &[1, -2]]))), (0, 2, 0));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = to_rat(&int_matrix(&[&[2, 1], &[1, 1]]));
        let i = inverse(&a).unwrap();
        assert!(a.mul(&i).is_identity());
        assert!(inverse(&to_rat(&int_matrix(&[&[1, 2], &[2, 4]]))).is_none());
    }

    #[test]
    fn orthogonal_basis_of_u() {
        let g = to_rat(&int_matrix(&[&[0, 2, 0], &[2, 0, 0], &[0, 0, -2]]));
        let b = orthogonal_basis(&g).unwrap();
        assert_eq!(b.len(), 3);
        for i in 0..3 {
            assert!(!g.bilinear(&b[i], &b[i]).is_zero());
            for j in 0..i {
                assert!(g.bilinear(&b[i], &b[j]).is_zero());
            }
        }
        assert!(orthogonal_basis(&to_rat(&int_matrix(&[&[0, 0], &[0, 1]]))).is_none());
    }

    #[test]
    fn char_poly_small() {
        // rotation of order 4: x^2 + 1
        assert_eq!(char_poly(&int_matrix(&[&[0, -1], &[1, 0]])), vec![int(1), int(0), int(1)]);
        // [[2,1],[1,3]]: x^2 - 5x + 5
        assert_eq!(char_poly(&int_matrix(&[&[2, 1], &[1, 3]])), vec![int(5), int(-5), int(1)]);
    }
}
