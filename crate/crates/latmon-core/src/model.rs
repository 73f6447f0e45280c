//! The standard model of `Λ = U(2)^3 ⊕ E8 ⊕ A1^2` and its named vectors.
//!
//! Basis order: three `U(2)` planes `(e_k, f_k)` at coordinates 0..6, the
//! `E8` simple roots (Bourbaki numbering) at 6..14, then the two `A1`
//! generators `halfsum` (14) and `halfdiff` (15).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeVector};
use crate::matrix::{Int, IntMatrix};
use crate::named;

pub const RANK: usize = 16;
pub const E8_START: usize = 6;
pub const HALFSUM: usize = 14;
pub const HALFDIFF: usize = 15;

#[derive(Clone, Debug)]
pub struct StandardLambdaModel {
    pub lattice: Lattice,
}

impl Default for StandardLambdaModel {
    fn default() -> Self {
        Self::new()
    }
}

impl StandardLambdaModel {
    pub fn new() -> Self {
        let l = named::build_named("U(2)^3 + E8 + A1^2").expect("standard model");
        StandardLambdaModel { lattice: l }
    }

    pub fn gram(&self) -> IntMatrix {
        self.lattice.int_gram().expect("integral")
    }

    fn unit(&self, i: usize) -> Vec<Int> {
        let mut v = vec![Int::zero(); RANK];
        v[i] = Int::from(1);
        v
    }

    fn vec(&self, c: Vec<Int>) -> LatticeVector {
        self.lattice.vector(c).expect("rank 16")
    }

    /// `L_i = e_1 + i f_1` in the first `U(2)`; square `4i`, divisibility 2.
    pub fn l_vector(&self, i: i64) -> LatticeVector {
        let mut c = self.unit(0);
        c[1] = Int::from(i);
        self.vec(c)
    }

    /// `e_k - f_k` in the k-th `U(2)` (k = 0, 1, 2); square -4, divisibility 2.
    pub fn u2_negative(&self, k: usize) -> LatticeVector {
        let mut c = self.unit(2 * k);
        c[2 * k + 1] = Int::from(-1);
        self.vec(c)
    }

    /// The `E8` simple root with Bourbaki index `k` (1..=8).
    pub fn e8_root(&self, k: usize) -> LatticeVector {
        assert!((1..=8).contains(&k));
        self.vec(self.unit(E8_START + k - 1))
    }

    /// A root of square -2 in `E8`.
    pub fn e1(&self) -> LatticeVector {
        self.e8_root(1)
    }

    /// Sum of two orthogonal `E8` roots; square -4, divisibility 1.
    pub fn e2(&self) -> LatticeVector {
        self.e8_root(1).add(&self.e8_root(2)).unwrap()
    }

    pub fn halfsum(&self) -> LatticeVector {
        self.vec(self.unit(HALFSUM))
    }

    pub fn halfdiff(&self) -> LatticeVector {
        self.vec(self.unit(HALFDIFF))
    }

    /// `halfsum + halfdiff`; square -4, divisibility 2.
    pub fn delta(&self) -> LatticeVector {
        self.halfsum().add(&self.halfdiff()).unwrap()
    }

    /// `halfsum - halfdiff`; square -4, divisibility 2.
    pub fn sigma(&self) -> LatticeVector {
        self.halfsum().add(&self.halfdiff().neg()).unwrap()
    }

    /// The exceptional involution: `-1` on `halfdiff`, identity elsewhere.
    pub fn exceptional_involution(&self) -> IntMatrix {
        let mut m = IntMatrix::identity(RANK);
        m[(HALFDIFF, HALFDIFF)] = Int::from(-1);
        m
    }

    /// Swap of the two `A1` summands.
    pub fn a1_swap(&self) -> IntMatrix {
        let mut m = IntMatrix::identity(RANK);
        m[(HALFSUM, HALFSUM)] = Int::zero();
        m[(HALFDIFF, HALFDIFF)] = Int::zero();
        m[(HALFSUM, HALFDIFF)] = Int::from(1);
        m[(HALFDIFF, HALFSUM)] = Int::from(1);
        m
    }

    /// Looks up a named vector. Names: `L(i)`, `Lm` (= `L(-1)`), `e1`, `e2`,
    /// `delta`, `sigma`, `halfsum`, `halfdiff`, `u(k)` for `e_k - f_k`,
    /// `r(k)` for the E8 root `k`.
    pub fn named_vector(&self, name: &str) -> Result<LatticeVector> {
        let name = name.trim();
        let arg = |prefix: &str| -> Option<i64> {
            name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
        };
        if let Some(i) = arg("L") {
            return Ok(self.l_vector(i));
        }
        if let Some(k) = arg("u") {
            if (0..3).contains(&k) {
                return Ok(self.u2_negative(k as usize));
            }
        }
        if let Some(k) = arg("r") {
            if (1..=8).contains(&k) {
                return Ok(self.e8_root(k as usize));
            }
        }
        Ok(match name {
            "Lm" => self.l_vector(-1),
            "e1" => self.e1(),
            "e2" => self.e2(),
            "delta" => self.delta(),
            "sigma" => self.sigma(),
            "halfsum" => self.halfsum(),
            "halfdiff" => self.halfdiff(),
            _ => return Err(Error::InvalidArgument(format!("unknown vector `{name}`"))),
        })
    }

    /// Evaluates an integer combination such as `2L(1) + 2e2 - delta`.
    pub fn vector_expr(&self, expr: &str) -> Result<LatticeVector> {
        let mut acc = vec![Int::zero(); RANK];
        let s = expr.replace(' ', "");
        if s.is_empty() {
            return Err(Error::InvalidArgument("empty vector expression".into()));
        }
        // split into signed terms at top-level + and -
        let mut terms = Vec::new();
        let mut depth = 0;
        let mut start = 0;
        let b = s.as_bytes();
        for (i, &c) in b.iter().enumerate() {
            match c {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start => {
                    terms.push(&s[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        terms.push(&s[start..]);
        for t in terms {
            let (sign, t) = match t.as_bytes()[0] {
                b'+' => (1, &t[1..]),
                b'-' => (-1, &t[1..]),
                _ => (1, t),
            };
            let digits = t.bytes().take_while(|c| c.is_ascii_digit()).count();
            let coef: i64 = if digits == 0 { 1 } else { t[..digits].parse().unwrap() };
            let rest = t[digits..].trim_start_matches('*');
            let v = self.named_vector(rest)?;
            for (a, x) in acc.iter_mut().zip(&v.coords) {
                *a += Int::from(sign * coef) * x;
            }
        }
        Ok(self.vec(acc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Rat;

    fn sq(v: &LatticeVector) -> i64 {
        use num_traits::ToPrimitive;
        v.square().to_integer().to_i64().unwrap()
    }

    fn div(v: &LatticeVector) -> i64 {
        use num_traits::ToPrimitive;
        v.divisibility().unwrap().to_i64().unwrap()
    }

    #[test]
    fn named_vectors() {
        let m = StandardLambdaModel::new();
        assert_eq!(m.lattice.signature(), (3, 13));
        for i in [-3, -1, 1, 2, 5] {
            let l = m.l_vector(i);
            assert_eq!(sq(&l), 4 * i);
            assert!(l.is_primitive());
            assert_eq!(div(&l), 2);
        }
        assert_eq!((sq(&m.e1()), div(&m.e1())), (-2, 1));
        assert_eq!((sq(&m.e2()), div(&m.e2())), (-4, 1));
        assert_eq!((sq(&m.delta()), div(&m.delta())), (-4, 2));
        assert_eq!((sq(&m.sigma()), div(&m.sigma())), (-4, 2));
        assert_eq!((sq(&m.halfsum()), div(&m.halfsum())), (-2, 2));
        assert_eq!(m.delta().inner(&m.sigma()).unwrap(), Rat::zero());
    }

    #[test]
    fn expressions() {
        let m = StandardLambdaModel::new();
        let v = m.vector_expr("2L(1) + 2e2 - delta").unwrap();
        assert_eq!((sq(&v), div(&v)), (-4, 2));
        let w = m.vector_expr("L(1)+e2-halfsum").unwrap();
        assert_eq!((sq(&w), div(&w)), (-2, 1));
        assert!(m.vector_expr("2*foo").is_err());
    }
}
