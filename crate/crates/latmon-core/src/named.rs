//! Named lattices and a small expression language for building them.
//!
//! Root lattices are negative definite. Accepted forms include
//! `U(2)^3 + E8 + A1^2`, `D8v(2)`, `A1(-4)`, `K7 + H7(2)` and the function
//! style `direct_sum(rescale(D4, 2), A1)`, `dual_rescale(D8, 2)`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::{Int, IntMatrix, Rat};

/// Parsed lattice expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeExpr {
    U,
    V,
    A(usize),
    D(usize),
    E8,
    K(u64),
    H(u64),
    /// Genus-only placeholder such as `L13`.
    Marker(String),
    Rescale(Box<LatticeExpr>, i64),
    DualRescale(Box<LatticeExpr>, i64),
    Sum(Vec<LatticeExpr>),
}

impl std::fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LatticeExpr::U => write!(f, "U"),
            LatticeExpr::V => write!(f, "V"),
            LatticeExpr::A(n) => write!(f, "A{n}"),
            LatticeExpr::D(n) => write!(f, "D{n}"),
            LatticeExpr::E8 => write!(f, "E8"),
            LatticeExpr::K(p) => write!(f, "K{p}"),
            LatticeExpr::H(p) => write!(f, "H{p}"),
            LatticeExpr::Marker(s) => write!(f, "{s}"),
            LatticeExpr::Rescale(e, m) => write!(f, "rescale({e}, {m})"),
            LatticeExpr::DualRescale(e, m) => write!(f, "dual_rescale({e}, {m})"),
            LatticeExpr::Sum(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "direct_sum({})", parts.join(", "))
            }
        }
    }
}

fn negated_cartan(n: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = Int::from(-2);
    }
    for &(a, b) in edges {
        g[(a, b)] = Int::from(1);
        g[(b, a)] = Int::from(1);
    }
    g
}

pub fn hyperbolic_u() -> Lattice {
    Lattice::from_i64(&[&[0, 1], &[1, 0]]).unwrap().named("U")
}

/// The odd unimodular plane `[[0,1],[1,1]]`.
pub fn plane_v() -> Lattice {
    Lattice::from_i64(&[&[0, 1], &[1, 1]]).unwrap().named("V")
}

pub fn root_a(n: usize) -> Result<Lattice> {
    if n == 0 {
        return Err(Error::InvalidArgument("A0".into()));
    }
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(Lattice::from_int_gram(&negated_cartan(n, &edges))?.named(format!("A{n}")))
}

/// `D_n` from the simple roots `e_i - e_{i+1}` and `e_{n-1} + e_n`.
pub fn root_d(n: usize) -> Result<Lattice> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("D{n}")));
    }
    let mut roots: Vec<Vec<i64>> = (0..n - 1)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v[i + 1] = -1;
            v
        })
        .collect();
    let mut last = vec![0; n];
    last[n - 2] = 1;
    last[n - 1] = 1;
    roots.push(last);
    let g = IntMatrix::from_fn(n, n, |i, j| {
        let d: i64 = roots[i].iter().zip(&roots[j]).map(|(a, b)| a * b).sum();
        Int::from(-d)
    });
    Ok(Lattice::from_int_gram(&g)?.named(format!("D{n}")))
}

/// `E8` with Bourbaki numbering: 1-3-4-5-6-7-8 and 2 attached to 4.
pub fn root_e8() -> Lattice {
    let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    Lattice::from_int_gram(&negated_cartan(8, &edges)).unwrap().named("E8")
}

fn odd_prime(p: u64) -> Result<()> {
    let prime = p > 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    if prime {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{p} is not an odd prime")))
    }
}

/// `K_p = [[(p+1)/2, -1], [-1, 2]]`, positive definite of determinant `p`.
pub fn k_p(p: u64) -> Result<Lattice> {
    odd_prime(p)?;
    let a = p.div_ceil(2) as i64;
    Ok(Lattice::from_i64(&[&[a, -1], &[-1, 2]])?.named(format!("K{p}")))
}

/// `H_p = [[(p-1)/2, 1], [1, -2]]`, hyperbolic of determinant `-p`.
pub fn h_p(p: u64) -> Result<Lattice> {
    odd_prime(p)?;
    let a = ((p - 1) / 2) as i64;
    Ok(Lattice::from_i64(&[&[a, 1], &[1, -2]])?.named(format!("H{p}")))
}

pub fn rescale(l: &Lattice, m: i64) -> Result<Lattice> {
    l.rescale(&Rat::from_integer(Int::from(m)))
}

/// `L^dual(m)`: dual basis Gram scaled by `m`.
pub fn dual_rescale(l: &Lattice, m: i64) -> Result<Lattice> {
    l.dual().rescale(&Rat::from_integer(Int::from(m)))
}

pub fn build(e: &LatticeExpr) -> Result<Lattice> {
    Ok(match e {
        LatticeExpr::U => hyperbolic_u(),
        LatticeExpr::V => plane_v(),
        LatticeExpr::A(n) => root_a(*n)?,
        LatticeExpr::D(n) => root_d(*n)?,
        LatticeExpr::E8 => root_e8(),
        LatticeExpr::K(p) => k_p(*p)?,
        LatticeExpr::H(p) => h_p(*p)?,
        LatticeExpr::Marker(s) => return Err(Error::GenusOnlyMarker(s.clone())),
        LatticeExpr::Rescale(x, m) => rescale(&build(x)?, *m)?,
        LatticeExpr::DualRescale(x, m) => dual_rescale(&build(x)?, *m)?,
        LatticeExpr::Sum(parts) => {
            let ls = parts.iter().map(build).collect::<Result<Vec<_>>>()?;
            Lattice::direct_sum(&ls)
        }
    })
}

/// Parses and builds; the result carries the expression text as its name.
pub fn build_named(spec: &str) -> Result<Lattice> {
    let e = parse_expr(spec)?;
    Ok(build(&e)?.named(spec.trim()))
}

// ---- parser ----

struct P<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> P<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.i, msg: msg.into() })
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, t: &str) -> bool {
        self.ws();
        if self.s[self.i..].starts_with(t.as_bytes()) {
            self.i += t.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let start = self.i;
        if self.i < self.s.len() && (self.s[self.i] == b'-' || self.s[self.i] == b'+') {
            self.i += 1;
        }
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        let t = std::str::from_utf8(&self.s[start..self.i]).unwrap();
        match t.parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.i = start;
                self.err("expected integer")
            }
        }
    }

    fn ident(&mut self) -> String {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.i]).into_owned()
    }

    fn sum(&mut self) -> Result<LatticeExpr> {
        let mut parts = vec![];
        loop {
            let t = self.term()?;
            match t {
                LatticeExpr::Sum(v) => parts.extend(v),
                t => parts.push(t),
            }
            if !(self.eat(b'+') || self.eat_str("⊕")) {
                break;
            }
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { LatticeExpr::Sum(parts) })
    }

    fn term(&mut self) -> Result<LatticeExpr> {
        let a = self.atom()?;
        if self.eat(b'^') {
            let k = self.int()?;
            if k < 1 {
                return self.err("repetition count must be positive");
            }
            return Ok(if k == 1 { a } else { LatticeExpr::Sum(vec![a; k as usize]) });
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<LatticeExpr> {
        if self.eat(b'(') {
            let e = self.sum()?;
            if !self.eat(b')') {
                return self.err("expected `)`");
            }
            return self.suffix(e, false);
        }
        let start = self.i;
        let id = self.ident();
        if id.is_empty() {
            return self.err("expected lattice name");
        }
        match id.as_str() {
            "direct_sum" | "rescale" | "dual_rescale" | "dual" => {
                if !self.eat(b'(') {
                    return self.err("expected `(`");
                }
                let first = self.sum()?;
                let out = match id.as_str() {
                    "direct_sum" => {
                        let mut v = vec![first];
                        while self.eat(b',') {
                            v.push(self.sum()?);
                        }
                        LatticeExpr::Sum(v)
                    }
                    "dual" => LatticeExpr::DualRescale(Box::new(first), 1),
                    _ => {
                        if !self.eat(b',') {
                            return self.err("expected `,`");
                        }
                        let m = self.int()?;
                        if id == "rescale" {
                            LatticeExpr::Rescale(Box::new(first), m)
                        } else {
                            LatticeExpr::DualRescale(Box::new(first), m)
                        }
                    }
                };
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                return Ok(out);
            }
            _ => {}
        }
        // dual marker: D8v, D8^v, D8∨
        let mut base = id.as_str();
        let mut dual = false;
        if base.len() > 1 && base.ends_with('v') && base != "V" {
            base = &base[..base.len() - 1];
            dual = true;
        }
        if !dual && (self.eat_str("∨") || self.eat_str("^v") || self.eat_str("^\\vee")) {
            dual = true;
        }
        let e = match named_atom(base) {
            Some(e) => e,
            None => {
                self.i = start;
                return Err(Error::UnknownConstructor(id));
            }
        };
        self.suffix(e, dual)
    }

    fn suffix(&mut self, e: LatticeExpr, dual: bool) -> Result<LatticeExpr> {
        let save = self.i;
        if self.eat(b'(') {
            if let Ok(m) = self.int() {
                if self.eat(b')') {
                    if m == 0 {
                        return self.err("scale factor must be nonzero");
                    }
                    return Ok(if dual {
                        LatticeExpr::DualRescale(Box::new(e), m)
                    } else {
                        LatticeExpr::Rescale(Box::new(e), m)
                    });
                }
            }
            self.i = save;
            return self.err("expected `(m)` scale factor");
        }
        Ok(if dual { LatticeExpr::DualRescale(Box::new(e), 1) } else { e })
    }
}

fn named_atom(id: &str) -> Option<LatticeExpr> {
    let num = |s: &str| s.parse::<u64>().ok().filter(|n| *n > 0);
    match id {
        "U" => return Some(LatticeExpr::U),
        "V" => return Some(LatticeExpr::V),
        "E8" => return Some(LatticeExpr::E8),
        _ => {}
    }
    let (head, tail) = id.split_at(1);
    let n = num(tail)?;
    match head {
        "A" => Some(LatticeExpr::A(n as usize)),
        "D" => Some(LatticeExpr::D(n as usize)),
        "K" => Some(LatticeExpr::K(n)),
        "H" => Some(LatticeExpr::H(n)),
        "L" => Some(LatticeExpr::Marker(id.to_owned())),
        _ => None,
    }
}

pub fn parse_expr(s: &str) -> Result<LatticeExpr> {
    let mut p = P { s: s.as_bytes(), i: 0 };
    let e = p.sum()?;
    p.ws();
    if p.i != p.s.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Whether `s` is a bare genus name such as `L13`.
pub fn is_genus_marker(s: &str) -> bool {
    matches!(parse_expr(s), Ok(LatticeExpr::Marker(_)))
}

/// `|det|` as an integer, for integral lattices.
pub fn abs_det(l: &Lattice) -> Int {
    let d = l.det();
    assert!(d.is_integer());
    let v = d.to_integer();
    if v < Int::zero() {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_lattices() {
        let e8 = root_e8();
        assert_eq!(e8.signature(), (0, 8));
        assert_eq!(abs_det(&e8), Int::from(1));
        assert!(e8.is_even());
        assert_eq!(abs_det(&root_d(4).unwrap()), Int::from(4));
        assert_eq!(abs_det(&root_d(8).unwrap()), Int::from(4));
        assert_eq!(abs_det(&root_a(2).unwrap()), Int::from(3));
        assert_eq!(abs_det(&root_d(2).unwrap()), Int::from(4));
    }

    #[test]
    fn k_and_h() {
        assert_eq!(k_p(7).unwrap().det(), Rat::from_integer(Int::from(7)));
        assert_eq!(h_p(7).unwrap().det(), Rat::from_integer(Int::from(-7)));
        assert_eq!(k_p(7).unwrap().signature(), (2, 0));
        assert!(k_p(9).is_err());
        assert!(k_p(2).is_err());
    }

    #[test]
    fn lambda_expression() {
        let l = build_named("U(2)^3 + E8 + A1^2").unwrap();
        assert_eq!(l.rank(), 16);
        assert_eq!(l.signature(), (3, 13));
        assert!(l.is_even());
        assert_eq!(abs_det(&l), Int::from(256));
        assert_eq!(l.blocks().len(), 6);
    }

    #[test]
    fn dual_rescaled_d8() {
        let l = build_named("D8v(2)").unwrap();
        assert!(l.is_even());
        assert_eq!(l.rank(), 8);
        assert_eq!(abs_det(&l), Int::from(64));
        assert_eq!(build_named("dual_rescale(D8, 2)").unwrap(), l);
        assert_eq!(build_named("D8^v(2)").unwrap(), l);
    }

    #[test]
    fn function_style_matches_shorthand() {
        let a = build_named("direct_sum(rescale(D4, 2), A1)").unwrap();
        let b = build_named("D4(2) + A1").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        assert!(matches!(build_named("F4"), Err(Error::UnknownConstructor(_))));
        assert!(matches!(build_named("L13"), Err(Error::GenusOnlyMarker(_))));
        assert!(matches!(build_named("U(0)"), Err(Error::Parse { .. })));
        assert!(build_named("U + ").is_err());
    }
}
