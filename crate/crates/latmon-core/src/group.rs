//! Permutation groups via a deterministic Schreier-Sims stabilizer chain,
//! and isometry groups of 2-elementary discriminant forms built on them.

use std::collections::VecDeque;

use crate::discform::{F2Form, FqmIsometry, TorsionQuadModule, DEFAULT_ELEMENT_CAP};
use crate::error::{Error, Result};

/// Permutation of `0..n`, `p[i]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: &[usize]) -> Perm {
        Perm(images.iter().map(|&x| x as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        Perm(out)
    }

    pub fn order(&self) -> u64 {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut l: u64 = 1;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0u64;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            l = num_integer::lcm(l, len);
        }
        l
    }
}

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    /// `transversal[p]` maps `point` to `p`
    transversal: Vec<Option<Perm>>,
    inv_transversal: Vec<Option<Perm>>,
}

/// A permutation group with a strong generating set.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    base_order: Vec<usize>,
    levels: Vec<Level>,
}

impl PermGroup {
    /// Builds the stabilizer chain. Base points are taken from
    /// `base_order` first (then all points in order), always the first point
    /// moved by the element that opens a new level.
    pub fn new(degree: usize, generators: Vec<Perm>, base_order: Vec<usize>) -> PermGroup {
        let mut order = base_order;
        let mut seen = vec![false; degree];
        order.retain(|&p| p < degree && !std::mem::replace(&mut seen[p], true));
        order.extend((0..degree).filter(|&p| !seen[p]));
        let mut g = PermGroup { degree, generators: Vec::new(), base_order: order, levels: Vec::new() };
        for p in generators {
            assert_eq!(p.len(), degree, "permutation degree mismatch");
            if !p.is_identity() {
                g.extend(0, p.clone());
            }
            g.generators.push(p);
        }
        g
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Sifts `g` from level `start`; returns the residue and the level where
    /// sifting stopped (`levels.len()` when it went through).
    fn sift(&self, start: usize, g: &Perm) -> (Perm, usize) {
        let mut h = g.clone();
        for (i, lvl) in self.levels.iter().enumerate().skip(start) {
            let b = h.apply(lvl.point);
            match &lvl.inv_transversal[b] {
                Some(ui) => h = h.then(ui),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.len() != self.degree {
            return false;
        }
        let (h, _) = self.sift(0, g);
        h.is_identity()
    }

    fn new_level(&mut self, g: &Perm) {
        let point = *self.base_order.iter().find(|&&p| g.apply(p) != p).expect("non-identity");
        let mut transversal = vec![None; self.degree];
        let mut inv = vec![None; self.degree];
        transversal[point] = Some(Perm::identity(self.degree));
        inv[point] = Some(Perm::identity(self.degree));
        self.levels.push(Level { point, gens: Vec::new(), orbit: vec![point], transversal, inv_transversal: inv });
    }

    /// Adds `g` (which fixes the base points before level `i`) to level `i`
    /// unless already generated, then closes the orbit and feeds the new
    /// Schreier generators to level `i + 1`.
    fn extend(&mut self, i: usize, g: Perm) {
        let (h, _) = self.sift(i, &g);
        if h.is_identity() {
            return;
        }
        if i == self.levels.len() {
            self.new_level(&g);
        }
        // the new point may not be moved by g if the level existed already;
        // that is fine, g still enlarges the group at this level
        self.levels[i].gens.push(g);
        let new_gen = self.levels[i].gens.len() - 1;

        let mut pending: Vec<Perm> = Vec::new();
        // edges (p, new generator) for existing orbit points
        let old_orbit = self.levels[i].orbit.clone();
        let mut queue: VecDeque<usize> = VecDeque::new();
        {
            let lvl = &mut self.levels[i];
            let s = lvl.gens[new_gen].clone();
            for &p in &old_orbit {
                let up = lvl.transversal[p].clone().unwrap();
                let q = s.apply(p);
                match &lvl.transversal[q] {
                    Some(_) => {
                        let schreier = up.then(&s).then(lvl.inv_transversal[q].as_ref().unwrap());
                        pending.push(schreier);
                    }
                    None => {
                        let uq = up.then(&s);
                        lvl.inv_transversal[q] = Some(uq.inverse());
                        lvl.transversal[q] = Some(uq);
                        lvl.orbit.push(q);
                        queue.push_back(q);
                    }
                }
            }
        }
        // new orbit points against every generator
        while let Some(p) = queue.pop_front() {
            let lvl = &mut self.levels[i];
            let up = lvl.transversal[p].clone().unwrap();
            for s in lvl.gens.clone() {
                let q = s.apply(p);
                match &lvl.transversal[q] {
                    Some(_) => {
                        let schreier = up.then(&s).then(lvl.inv_transversal[q].as_ref().unwrap());
                        pending.push(schreier);
                    }
                    None => {
                        let uq = up.then(&s);
                        lvl.inv_transversal[q] = Some(uq.inverse());
                        lvl.transversal[q] = Some(uq);
                        lvl.orbit.push(q);
                        queue.push_back(q);
                    }
                }
            }
        }
        for h in pending {
            if !h.is_identity() {
                self.extend(i + 1, h);
            }
        }
    }

    /// Orbits of the group on `0..degree`, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators, 0..self.degree)
    }

    /// Whether `g` commutes with every generator.
    pub fn is_central(&self, g: &Perm) -> bool {
        self.generators.iter().all(|s| g.then(s) == s.then(g))
    }
}

/// Orbits of the points in `points` under the group generated by `gens`.
pub fn orbits_of(degree: usize, gens: &[Perm], points: impl IntoIterator<Item = usize>) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for s in points {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut orb = vec![s];
        let mut k = 0;
        while k < orb.len() {
            let x = orb[k];
            k += 1;
            for g in gens {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orb.push(y);
                }
            }
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}

/// Subgroup of `O(T)` for a 2-elementary discriminant module `T`.
#[derive(Clone, Debug)]
pub struct FiniteIsometryGroup {
    pub module: TorsionQuadModule,
    pub generators: Vec<FqmIsometry>,
    perm_group: PermGroup,
}

impl FiniteIsometryGroup {
    pub fn new(module: &TorsionQuadModule, generators: Vec<FqmIsometry>) -> Result<Self> {
        Self::with_cap(module, generators, DEFAULT_ELEMENT_CAP)
    }

    pub fn with_cap(module: &TorsionQuadModule, generators: Vec<FqmIsometry>, cap: usize) -> Result<Self> {
        if !module.is_two_elementary() {
            return Err(Error::NotTwoElementary);
        }
        let n = module.order() as usize;
        if n > cap {
            return Err(Error::ModuleTooLarge(n));
        }
        if generators.iter().any(|g| g.images.len() != module.num_generators()) {
            return Err(Error::ModuleMismatch);
        }
        let perms: Vec<Perm> = generators.iter().map(|g| Perm::from_images(&g.perm(module))).collect();
        let base: Vec<usize> = (0..module.num_generators()).map(|i| module.index(&module.generator(i))).collect();
        let perm_group = PermGroup::new(n, perms, base);
        Ok(FiniteIsometryGroup { module: module.clone(), generators, perm_group })
    }

    pub fn order(&self) -> u128 {
        self.perm_group.order()
    }

    pub fn perm_group(&self) -> &PermGroup {
        &self.perm_group
    }

    pub fn perm_of(&self, g: &FqmIsometry) -> Perm {
        Perm::from_images(&g.perm(&self.module))
    }

    pub fn contains(&self, g: &FqmIsometry) -> bool {
        g.images.len() == self.module.num_generators() && self.perm_group.contains(&self.perm_of(g))
    }

    /// Orbits on a set of element indices (the set must be invariant).
    pub fn orbits_on(&self, points: &[usize]) -> Vec<Vec<usize>> {
        orbits_of(self.perm_group.degree(), self.perm_group.generators(), points.iter().copied())
    }

    pub fn is_central(&self, g: &FqmIsometry) -> bool {
        self.perm_group.is_central(&self.perm_of(g))
    }
}

/// Group generated by all reflections `T_u`, `q(u) = 1`.
pub fn full_reflection_group(t: &TorsionQuadModule) -> Result<FiniteIsometryGroup> {
    full_reflection_group_with_cap(t, DEFAULT_ELEMENT_CAP)
}

pub fn full_reflection_group_with_cap(t: &TorsionQuadModule, cap: usize) -> Result<FiniteIsometryGroup> {
    let f2 = t.f2()?;
    if f2.size() > cap {
        return Err(Error::ModuleTooLarge(f2.size()));
    }
    let gens: Vec<FqmIsometry> = f2
        .gamma()
        .into_iter()
        .map(|u| crate::discform::transvection(t, &t.element(u)).map(|tv| tv.map))
        .collect::<Result<_>>()?;
    FiniteIsometryGroup::with_cap(t, gens, cap)
}

/// Action of a group on `K / R`, where `K = {q in Z}` and `R` its radical,
/// and the full symplectic group of the induced alternating form.
#[derive(Clone, Debug)]
pub struct SymplecticQuotient {
    pub dim: usize,
    pub image: PermGroup,
    pub full_symplectic: PermGroup,
}

/// Builds the image of `g` in `Sp(K/R)`; requires `R = {0, r}`.
pub fn symplectic_quotient(g: &FiniteIsometryGroup) -> Result<SymplecticQuotient> {
    let t = &g.module;
    let f2: F2Form = t.f2()?;
    let kr = crate::discform::kernel_and_radical(t)?;
    let r = kr.r.ok_or_else(|| Error::InvalidArgument("radical is not {0, r} with q(r) = 1".into()))?;
    // basis of K containing r: greedy span
    let mut basis = vec![r];
    let mut span = vec![0usize, r];
    for &x in &kr.kernel {
        if !span.contains(&x) {
            basis.push(x);
            let add: Vec<usize> = span.iter().map(|s| s ^ x).collect();
            span.extend(add);
        }
    }
    let dim = basis.len() - 1;
    // coordinates of every element of K in the basis; drop the r coordinate
    let mut coord = vec![usize::MAX; f2.size()];
    for mask in 0..(1usize << basis.len()) {
        let mut x = 0;
        for (i, b) in basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                x ^= b;
            }
        }
        coord[x] = mask >> 1;
    }
    let lift = |c: usize| -> usize {
        let mut x = 0;
        for i in 0..dim {
            if c >> i & 1 == 1 {
                x ^= basis[i + 1];
            }
        }
        x
    };
    let n = 1usize << dim;
    let perms: Vec<Perm> = g
        .perm_group
        .generators()
        .iter()
        .map(|p| Perm::from_images(&(0..n).map(|c| coord[p.apply(lift(c))]).collect::<Vec<_>>()))
        .collect();
    let image = PermGroup::new(n, perms, (0..dim).map(|i| 1 << i).collect());
    // symplectic transvections of the induced form
    let bq = |a: usize, c: usize| f2.b(lift(a), lift(c));
    let sp_gens: Vec<Perm> = (1..n)
        .map(|v| Perm::from_images(&(0..n).map(|x| if bq(v, x) == 1 { x ^ v } else { x }).collect::<Vec<_>>()))
        .collect();
    let full = PermGroup::new(n, sp_gens, (0..dim).map(|i| 1 << i).collect());
    Ok(SymplecticQuotient { dim, image, full_symplectic: full })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discform::discriminant_form;
    use crate::named::build_named;

    fn cycle(n: usize, c: &[usize]) -> Perm {
        let mut p: Vec<usize> = (0..n).collect();
        for w in 0..c.len() {
            p[c[w]] = c[(w + 1) % c.len()];
        }
        Perm::from_images(&p)
    }

    #[test]
    fn symmetric_groups() {
        for n in 2..8usize {
            let g = PermGroup::new(n, vec![cycle(n, &[0, 1]), cycle(n, &(0..n).collect::<Vec<_>>())], vec![]);
            let fact: u128 = (1..=n as u128).product();
            assert_eq!(g.order(), fact);
        }
    }

    #[test]
    fn alternating_and_membership() {
        let n = 6;
        let gens: Vec<Perm> = (0..n - 2).map(|i| cycle(n, &[i, i + 1, i + 2])).collect();
        let g = PermGroup::new(n, gens, vec![]);
        assert_eq!(g.order(), 360);
        assert!(g.contains(&cycle(n, &[0, 3, 5])));
        assert!(!g.contains(&cycle(n, &[0, 3])));
    }

    #[test]
    fn small_reflection_groups() {
        let t = discriminant_form(&build_named("A1").unwrap()).unwrap();
        assert_eq!(full_reflection_group(&t).unwrap().order(), 1);
        let t = discriminant_form(&build_named("A1^2").unwrap()).unwrap();
        assert_eq!(full_reflection_group(&t).unwrap().order(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let t = discriminant_form(&build_named("U(2)^3 + A1^2").unwrap()).unwrap();
        assert!(matches!(full_reflection_group_with_cap(&t, 64), Err(Error::ModuleTooLarge(256))));
    }
}
