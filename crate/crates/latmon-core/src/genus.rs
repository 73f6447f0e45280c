//! Conway-Sloane genus symbols.
//!
//! `padic_jordan` returns one valid Jordan decomposition. At `p = 2` such a
//! decomposition is not unique; `canonicalize` applies oddity fusion inside
//! compartments and walks signs to the front of each train, which gives a
//! canonical representative. Genus equality compares canonical forms.
//!
//! Strings look like `II_(3,13)2^8_6` or `II_(0,10)2^{-2}3^{-5}`: a
//! superscript is a single character or a braced group, the sign of the
//! exponent is the block sign, and a subscript marks an odd (type I) 2-adic
//! block with its oddity. Unimodular blocks are left implicit.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::{Int, Rat, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicJordanBlock {
    /// exponent `e` of the scale `p^e`
    pub scale: u32,
    pub rank: usize,
    /// `+1` or `-1`
    pub sign: i8,
    /// type I (odd); only meaningful at `p = 2`
    pub odd: bool,
    /// oddity mod 8, zero for even blocks and odd primes
    pub oddity: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalSymbol {
    pub prime: u64,
    /// sorted by scale, ranks positive, unimodular block included
    pub blocks: Vec<PadicJordanBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenusSymbol {
    pub signature: (usize, usize),
    pub even: bool,
    /// sorted by prime; always contains 2
    pub locals: Vec<LocalSymbol>,
}

impl GenusSymbol {
    pub fn rank(&self) -> usize {
        self.signature.0 + self.signature.1
    }

    pub fn local(&self, p: u64) -> Option<&LocalSymbol> {
        self.locals.iter().find(|l| l.prime == p)
    }

    /// `|det|` implied by the symbol.
    pub fn abs_det(&self) -> Int {
        let mut d = Int::one();
        for l in &self.locals {
            for b in &l.blocks {
                d *= num_traits::pow(Int::from(l.prime), b.scale as usize * b.rank);
            }
        }
        d
    }

    pub fn det(&self) -> Int {
        let d = self.abs_det();
        if self.signature.1 % 2 == 1 {
            -d
        } else {
            d
        }
    }

    pub fn canonical(&self) -> GenusSymbol {
        canonicalize(self)
    }
}

impl fmt::Display for GenusSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl Serialize for GenusSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&render(self))
    }
}

// ---- number theory helpers ----

fn vp(x: &Int, p: u64) -> u32 {
    debug_assert!(!x.is_zero());
    let p = Int::from(p);
    let mut x = x.abs();
    let mut v = 0;
    while x.is_multiple_of(&p) {
        x /= &p;
        v += 1;
    }
    v
}

fn vp_rat(x: &Rat, p: u64) -> i64 {
    vp(x.numer(), p) as i64 - vp(x.denom(), p) as i64
}

/// `x / p^v(x)` as a rational with numerator and denominator prime to `p`.
fn unit_part(x: &Rat, p: u64) -> Rat {
    let v = vp_rat(x, p);
    let pp = Rat::from_integer(num_traits::pow(Int::from(p), v.unsigned_abs() as usize));
    if v >= 0 {
        x / pp
    } else {
        x * pp
    }
}

/// Legendre symbol of an integer prime to the odd prime `p`.
fn legendre(a: &Int, p: u64) -> i8 {
    let pi = Int::from(p);
    let a = a.mod_floor(&pi);
    assert!(!a.is_zero());
    let e = Int::from((p - 1) / 2);
    if a.modpow(&e, &pi).is_one() {
        1
    } else {
        -1
    }
}

/// Sign character of a `p`-adic unit: Legendre for odd `p`, and
/// `+1` iff `u = ±1 mod 8` at `p = 2`.
fn unit_sign(u: &Rat, p: u64) -> i8 {
    if p == 2 {
        match unit_mod8(u) {
            1 | 7 => 1,
            _ => -1,
        }
    } else {
        legendre(u.numer(), p) * legendre(u.denom(), p)
    }
}

/// A 2-adic unit mod 8 (odd numerator and denominator).
fn unit_mod8(u: &Rat) -> u8 {
    let eight = Int::from(8);
    // d^{-1} = d mod 8 for odd d
    (u.numer() * u.denom()).mod_floor(&eight).to_u8().unwrap()
}

/// Prime divisors of a nonzero integer, ascending.
pub fn prime_divisors(n: &Int) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d: u64 = 2;
    while Int::from(d) * Int::from(d) <= n {
        let di = Int::from(d);
        if n.is_multiple_of(&di) {
            out.push(d);
            while n.is_multiple_of(&di) {
                n /= &di;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > Int::one() {
        out.push(n.to_u64().expect("prime factor fits in u64"));
    }
    out
}

// ---- Jordan decomposition ----

struct Piece {
    scale: u32,
    rank: usize,
    unit: Rat,
    odd: bool,
}

fn symmetric_eliminate(a: &mut RatMatrix, alive: &mut Vec<usize>, piv: &[usize]) {
    // Schur complement of the pivot block
    alive.retain(|x| !piv.contains(x));
    if piv.len() == 1 {
        let p = piv[0];
        let d = a[(p, p)].clone();
        for &i in alive.iter() {
            if a[(i, p)].is_zero() {
                continue;
            }
            let f = &a[(i, p)] / &d;
            for &j in alive.iter() {
                let v = &a[(i, j)] - &f * &a[(p, j)];
                a[(i, j)] = v;
            }
        }
    } else {
        let (p, q) = (piv[0], piv[1]);
        let (b11, b12, b22) = (a[(p, p)].clone(), a[(p, q)].clone(), a[(q, q)].clone());
        let det = &b11 * &b22 - &b12 * &b12;
        let (i11, i12, i22) = (&b22 / &det, -&b12 / &det, &b11 / &det);
        let rows: Vec<(usize, Rat, Rat)> = alive
            .iter()
            .map(|&i| {
                let (x, y) = (&a[(i, p)], &a[(i, q)]);
                (i, x * &i11 + y * &i12, x * &i12 + y * &i22)
            })
            .collect();
        for (i, c1, c2) in rows {
            for &j in alive.iter() {
                let v = &a[(i, j)] - &c1 * &a[(p, j)] - &c2 * &a[(q, j)];
                a[(i, j)] = v;
            }
        }
    }
}

fn jordan_pieces(gram: &RatMatrix, p: u64) -> Vec<Piece> {
    let mut a = gram.clone();
    let mut alive: Vec<usize> = (0..a.rows()).collect();
    let mut out = Vec::new();
    while !alive.is_empty() {
        let mut min: Option<i64> = None;
        for &i in &alive {
            for &j in &alive {
                if !a[(i, j)].is_zero() {
                    let v = vp_rat(&a[(i, j)], p);
                    min = Some(min.map_or(v, |m: i64| m.min(v)));
                }
            }
        }
        let m = min.expect("nondegenerate form");
        let diag = alive.iter().copied().find(|&i| !a[(i, i)].is_zero() && vp_rat(&a[(i, i)], p) == m);
        if let Some(i) = diag {
            out.push(Piece { scale: m as u32, rank: 1, unit: unit_part(&a[(i, i)], p), odd: true });
            symmetric_eliminate(&mut a, &mut alive, &[i]);
            continue;
        }
        let (i, j) = alive
            .iter()
            .flat_map(|&i| alive.iter().map(move |&j| (i, j)))
            .find(|&(i, j)| i != j && !a[(i, j)].is_zero() && vp_rat(&a[(i, j)], p) == m)
            .unwrap();
        if p != 2 {
            // e_i <- e_i + e_j gives a diagonal entry of minimal valuation
            let n = a.rows();
            for k in 0..n {
                let v = &a[(i, k)] + &a[(j, k)];
                a[(i, k)] = v;
            }
            for k in 0..n {
                let v = &a[(k, i)] + &a[(k, j)];
                a[(k, i)] = v;
            }
            out.push(Piece { scale: m as u32, rank: 1, unit: unit_part(&a[(i, i)], p), odd: true });
            symmetric_eliminate(&mut a, &mut alive, &[i]);
        } else {
            let det = &a[(i, i)] * &a[(j, j)] - &a[(i, j)] * &a[(i, j)];
            out.push(Piece { scale: m as u32, rank: 2, unit: unit_part(&det, 2), odd: false });
            symmetric_eliminate(&mut a, &mut alive, &[i, j]);
        }
    }
    out
}

/// A Jordan decomposition of an integral lattice at `p`, one block per scale.
pub fn padic_jordan(l: &Lattice, p: u64) -> Result<Vec<PadicJordanBlock>> {
    if !l.is_integral() {
        return Err(Error::NotIntegral);
    }
    if p < 2 || prime_divisors(&Int::from(p)) != vec![p] {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let pieces = jordan_pieces(l.gram(), p);
    let mut scales: Vec<u32> = pieces.iter().map(|x| x.scale).collect();
    scales.sort_unstable();
    scales.dedup();
    let mut out = Vec::new();
    for s in scales {
        let ps: Vec<&Piece> = pieces.iter().filter(|x| x.scale == s).collect();
        let rank = ps.iter().map(|x| x.rank).sum();
        let unit: Rat = ps.iter().fold(Rat::one(), |acc, x| acc * &x.unit);
        let sign = unit_sign(&unit, p);
        let (odd, oddity) = if p == 2 {
            let odd = ps.iter().any(|x| x.odd);
            let t: u32 = ps.iter().filter(|x| x.odd).map(|x| unit_mod8(&x.unit) as u32).sum();
            (odd, (t % 8) as u8)
        } else {
            (false, 0)
        };
        out.push(PadicJordanBlock { scale: s, rank, sign, odd, oddity });
    }
    Ok(out)
}

/// The genus symbol from a Jordan decomposition at each relevant prime,
/// without canonical reduction.
pub fn genus_symbol_raw(l: &Lattice) -> Result<GenusSymbol> {
    if !l.is_integral() {
        return Err(Error::NotIntegral);
    }
    let det = l.det().to_integer();
    let mut primes = prime_divisors(&(det * Int::from(2)));
    primes.sort_unstable();
    let mut locals = Vec::new();
    for p in primes {
        let blocks = padic_jordan(l, p)?;
        locals.push(LocalSymbol { prime: p, blocks });
    }
    Ok(GenusSymbol { signature: l.signature(), even: l.is_even(), locals })
}

/// Canonical genus symbol of an integral lattice.
pub fn genus_symbol(l: &Lattice) -> Result<GenusSymbol> {
    Ok(canonicalize(&genus_symbol_raw(l)?))
}

// ---- canonical 2-adic form ----

/// Maximal runs of odd blocks with consecutive scales (indices into blocks).
pub fn compartments(blocks: &[PadicJordanBlock]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < blocks.len() {
        if blocks[i].odd {
            let mut c = vec![i];
            while i + 1 < blocks.len() && blocks[i + 1].odd && blocks[i + 1].scale == blocks[i].scale + 1 {
                i += 1;
                c.push(i);
            }
            out.push(c);
        }
        i += 1;
    }
    out
}

/// Trains: consecutive blocks stay together when a gap of one scale has an
/// odd block on either side, or a gap of two scales has odd blocks on both.
pub fn trains(blocks: &[PadicJordanBlock]) -> Vec<Vec<usize>> {
    if blocks.is_empty() {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur = vec![0];
    for i in 1..blocks.len() {
        let (prev, b) = (&blocks[i - 1], &blocks[i]);
        let gap = b.scale - prev.scale;
        let joined = match gap {
            1 => prev.odd || b.odd,
            2 => prev.odd && b.odd,
            _ => false,
        };
        if joined {
            cur.push(i);
        } else {
            out.push(std::mem::replace(&mut cur, vec![i]));
        }
    }
    out.push(cur);
    out
}

fn canonical_2adic(blocks: &[PadicJordanBlock]) -> Vec<PadicJordanBlock> {
    let mut s = blocks.to_vec();
    let comps = compartments(&s);
    for c in &comps {
        let t: u32 = c.iter().map(|&i| s[i].oddity as u32).sum();
        for &i in c {
            s[i].oddity = 0;
        }
        s[c[0]].oddity = (t % 8) as u8;
    }
    for train in trains(&s) {
        for k in (1..train.len()).rev() {
            let t1 = train[k];
            if s[t1].sign == -1 {
                s[t1].sign = 1;
                s[t1 - 1].sign = -s[t1 - 1].sign;
                for c in &comps {
                    if c.contains(&(t1 - 1)) || c.contains(&t1) {
                        s[c[0]].oddity = (s[c[0]].oddity + 4) % 8;
                    }
                }
            }
        }
    }
    s
}

pub fn canonicalize(g: &GenusSymbol) -> GenusSymbol {
    let mut out = g.clone();
    for l in &mut out.locals {
        if l.prime == 2 {
            l.blocks = canonical_2adic(&l.blocks);
        }
    }
    out
}

pub fn genus_equal(a: &GenusSymbol, b: &GenusSymbol) -> bool {
    canonicalize(a) == canonicalize(b)
}

// ---- validity ----

fn excess_odd(l: &LocalSymbol) -> i64 {
    let mut e = 0i64;
    for b in &l.blocks {
        let q = num_traits::pow(Int::from(l.prime), b.scale as usize);
        let qm = ((q - Int::one()) * Int::from(b.rank as u64)).mod_floor(&Int::from(8)).to_i64().unwrap();
        e += qm;
        if b.scale % 2 == 1 && b.sign == -1 {
            e += 4;
        }
    }
    e.rem_euclid(8)
}

fn oddity_2(l: &LocalSymbol) -> i64 {
    let mut t = 0i64;
    for b in &l.blocks {
        t += b.oddity as i64;
        if b.scale % 2 == 1 && b.sign == -1 {
            t += 4;
        }
    }
    t.rem_euclid(8)
}

/// Checks the local existence conditions, determinant consistency and the
/// oddity formula.
pub fn validate(g: &GenusSymbol) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidSymbol(m));
    let n = g.rank();
    if g.local(2).is_none() {
        return bad("missing 2-adic symbol".into());
    }
    let det = g.det();
    for l in &g.locals {
        let total: usize = l.blocks.iter().map(|b| b.rank).sum();
        if total != n {
            return bad(format!("ranks at {} sum to {total}, expected {n}", l.prime));
        }
        for w in l.blocks.windows(2) {
            if w[0].scale >= w[1].scale {
                return bad("scales must increase".into());
            }
        }
        if l.blocks.iter().any(|b| b.rank == 0) {
            return bad("zero rank block".into());
        }
        let v = vp(&det, l.prime);
        let unit = Rat::from_integer(det.clone() / num_traits::pow(Int::from(l.prime), v as usize));
        let prod: i8 = l.blocks.iter().map(|b| b.sign).product();
        if prod != unit_sign(&unit, l.prime) {
            return bad(format!("signs at {} contradict the determinant", l.prime));
        }
        if l.prime == 2 {
            for b in &l.blocks {
                if !b.odd && (b.rank % 2 == 1 || b.oddity != 0) {
                    return bad("even 2-adic block needs even rank and oddity 0".into());
                }
            }
            if let Some(b0) = l.blocks.first().filter(|b| b.scale == 0) {
                if b0.odd == g.even {
                    return bad("unimodular 2-adic block does not match the parity".into());
                }
            } else if !g.even {
                return bad("odd lattice without odd unimodular block".into());
            }
            for c in compartments(&l.blocks) {
                let r: usize = c.iter().map(|&i| l.blocks[i].rank).sum();
                let t: usize = c.iter().map(|&i| l.blocks[i].oddity as usize).sum();
                if r % 2 != t % 2 {
                    return bad("compartment oddity has the wrong parity".into());
                }
            }
        } else if l.blocks.iter().any(|b| b.odd || b.oddity != 0) {
            return bad("odd primes carry no oddity".into());
        }
    }
    let mut lhs = g.signature.0 as i64 - g.signature.1 as i64;
    for l in &g.locals {
        if l.prime != 2 {
            lhs += excess_odd(l);
        }
    }
    if (lhs - oddity_2(g.local(2).unwrap())).rem_euclid(8) != 0 {
        return bad("oddity formula fails".into());
    }
    Ok(())
}

// ---- rendering ----

fn sup(s: &str) -> String {
    if s.len() == 1 {
        s.to_owned()
    } else {
        format!("{{{s}}}")
    }
}

pub fn render(g: &GenusSymbol) -> String {
    let mut s = format!("{}_({},{})", if g.even { "II" } else { "I" }, g.signature.0, g.signature.1);
    for l in &g.locals {
        for b in &l.blocks {
            if b.scale == 0 && !(l.prime == 2 && b.odd) {
                continue;
            }
            let q = num_traits::pow(Int::from(l.prime), b.scale as usize);
            let e = if b.sign < 0 { format!("-{}", b.rank) } else { b.rank.to_string() };
            s.push_str(&format!("{q}^{}", sup(&e)));
            if l.prime == 2 && b.odd {
                s.push_str(&format!("_{}", b.oddity));
            }
        }
    }
    s
}

// ---- parsing ----

struct Cursor<'a> {
    s: &'a [u8],
    i: usize,
}

impl Cursor<'_> {
    fn err<T>(&self, m: &str) -> Result<T> {
        Err(Error::Parse { pos: self.i, msg: m.into() })
    }
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }
    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }
    fn digits(&mut self) -> Option<String> {
        let st = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        (self.i > st).then(|| String::from_utf8_lossy(&self.s[st..self.i]).into_owned())
    }
    /// Single character or braced group after `^` or `_`.
    fn script(&mut self) -> Result<String> {
        match self.s.get(self.i) {
            Some(b'{') => {
                let st = self.i + 1;
                let Some(len) = self.s[st..].iter().position(|&c| c == b'}') else {
                    return self.err("unclosed brace");
                };
                self.i = st + len + 1;
                Ok(String::from_utf8_lossy(&self.s[st..st + len]).trim().to_owned())
            }
            Some(c) if c.is_ascii_digit() => {
                self.i += 1;
                Ok((*c as char).to_string())
            }
            _ => self.err("expected a digit or braced group"),
        }
    }
}

/// Prime and exponent of a prime power `q > 1`.
fn prime_power(q: &Int) -> Option<(u64, u32)> {
    let ps = prime_divisors(q);
    if ps.len() != 1 {
        return None;
    }
    Some((ps[0], vp(q, ps[0])))
}

/// Parses a symbol string; implicit unimodular blocks are reconstructed from
/// the signature and determinant. The result is validated but not
/// canonicalized.
pub fn parse(text: &str) -> Result<GenusSymbol> {
    let mut c = Cursor { s: text.as_bytes(), i: 0 };
    c.ws();
    let even = if text[c.i..].starts_with("II") {
        c.i += 2;
        true
    } else if text[c.i..].starts_with('I') {
        c.i += 1;
        false
    } else {
        return c.err("expected `I` or `II`");
    };
    if !c.eat(b'_') {
        return c.err("expected `_`");
    }
    let braced = c.eat(b'{');
    if !c.eat(b'(') {
        return c.err("expected `(`");
    }
    c.ws();
    let pos: usize =
        c.digits().and_then(|d| d.parse().ok()).ok_or(Error::Parse { pos: c.i, msg: "signature".into() })?;
    if !c.eat(b',') {
        return c.err("expected `,`");
    }
    c.ws();
    let neg: usize =
        c.digits().and_then(|d| d.parse().ok()).ok_or(Error::Parse { pos: c.i, msg: "signature".into() })?;
    if !c.eat(b')') || (braced && !c.eat(b'}')) {
        return c.err("expected `)`");
    }
    let n = pos + neg;

    // (prime, block) in input order
    let mut raw: Vec<(u64, PadicJordanBlock)> = Vec::new();
    loop {
        c.ws();
        if c.i >= c.s.len() {
            break;
        }
        let Some(qs) = c.digits() else { return c.err("expected a scale") };
        let q: Int = qs.parse().unwrap();
        let mut exp: Option<String> = None;
        let mut odd: Option<String> = None;
        for _ in 0..2 {
            match c.s.get(c.i) {
                Some(b'^') if exp.is_none() => {
                    c.i += 1;
                    exp = Some(c.script()?);
                }
                Some(b'_') if odd.is_none() => {
                    c.i += 1;
                    odd = Some(c.script()?);
                }
                _ => break,
            }
        }
        let Some(exp) = exp else { return c.err("expected `^`") };
        let (sign, rank_s) = match exp.strip_prefix('-') {
            Some(r) => (-1i8, r),
            None => (1i8, exp.strip_prefix('+').unwrap_or(&exp)),
        };
        let rank: usize = rank_s.parse().map_err(|_| Error::Parse { pos: c.i, msg: "bad rank".into() })?;
        let (p, e) = if q.is_one() {
            (2, 0)
        } else {
            prime_power(&q).ok_or(Error::Parse { pos: c.i, msg: format!("{q} is not a prime power") })?
        };
        let oddity = match &odd {
            Some(t) => {
                if p != 2 {
                    return c.err("oddity on an odd prime");
                }
                let v: u32 = t.parse().map_err(|_| Error::Parse { pos: c.i, msg: "bad oddity".into() })?;
                (v % 8) as u8
            }
            None => 0,
        };
        if rank == 0 {
            return c.err("zero rank block");
        }
        raw.push((p, PadicJordanBlock { scale: e, rank, sign, odd: odd.is_some(), oddity }));
    }

    let mut primes: Vec<u64> = raw.iter().map(|(p, _)| *p).collect();
    primes.push(2);
    primes.sort_unstable();
    primes.dedup();
    let abs_det =
        raw.iter().fold(Int::one(), |acc, (p, b)| acc * num_traits::pow(Int::from(*p), b.scale as usize * b.rank));
    let det = if neg % 2 == 1 { -abs_det } else { abs_det };
    let mut locals = Vec::new();
    for p in primes {
        let mut blocks: Vec<PadicJordanBlock> = raw.iter().filter(|(q, _)| *q == p).map(|(_, b)| b.clone()).collect();
        blocks.sort_by_key(|b| b.scale);
        let used: usize = blocks.iter().map(|b| b.rank).sum();
        if used > n {
            return Err(Error::InvalidSymbol(format!("ranks at {p} exceed the rank {n}")));
        }
        let has_unimodular = blocks.first().is_some_and(|b| b.scale == 0);
        if used < n && !has_unimodular {
            let v = vp(&det, p);
            let unit = Rat::from_integer(det.clone() / num_traits::pow(Int::from(p), v as usize));
            let others: i8 = blocks.iter().map(|b| b.sign).product();
            let sign = unit_sign(&unit, p) * others;
            if p == 2 && !even {
                return Err(Error::InvalidSymbol("odd lattice needs an explicit 1-block".into()));
            }
            blocks.insert(0, PadicJordanBlock { scale: 0, rank: n - used, sign, odd: false, oddity: 0 });
        }
        locals.push(LocalSymbol { prime: p, blocks });
    }
    let g = GenusSymbol { signature: (pos, neg), even, locals };
    validate(&g)?;
    Ok(g)
}
