//! Permutations and permutation groups with a stabilizer chain.
//!
//! Composition convention: `p.then(q)` (and [`compose`]`(p, q)`) applies `p`
//! first, so `result[i] = q[p[i]]`. Every product in the crate is written
//! in this left-to-right order.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image array is not a bijection on 0..{0}")]
    NotBijective(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("point set is not invariant under the group")]
    NotInvariant,
    #[error("point {0} out of range")]
    PointOutOfRange(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            if cycle.len() > 1 {
                let parts: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(" "))?;
            }
        }
        Ok(())
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(PermError::NotBijective(n));
            }
        }
        Ok(Permutation { images })
    }

    /// Permutation of `0..degree` given by a function; panics if the map is
    /// not a bijection.
    pub fn from_fn(degree: usize, f: impl Fn(usize) -> usize) -> Self {
        Self::from_images((0..degree).map(f).collect()).expect("map is a bijection")
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Apply `self`, then `other`. Panics on degree mismatch.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    pub fn pow(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut result = Permutation::identity(self.degree());
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        result
    }

    /// `g⁻¹ · self · g` in apply-left-first order: first undo `g`, then
    /// `self`, then `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| {
            let len = c.len() as u64;
            acc / gcd(acc, len) * len
        })
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, &x)| *i != x).map(|(i, _)| i)
    }

    pub fn fixes(&self, i: usize) -> bool {
        self.images[i] == i
    }

    pub fn has_fixed_point(&self) -> bool {
        self.images.iter().enumerate().any(|(i, &x)| i == x)
    }

    /// Image of a point set, sorted.
    pub fn image_of_set(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&x| self.images[x]).collect();
        out.sort_unstable();
        out
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `compose(p, q)[i] = q[p[i]]`: apply `p` first.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermError> {
    if p.degree() != q.degree() {
        return Err(PermError::DegreeMismatch(p.degree(), q.degree()));
    }
    Ok(p.then(q))
}

/// One level of a stabilizer chain: the orbit of `base_point` under the
/// strong generators fixing all earlier base points, with transversal
/// elements mapping `base_point` to each orbit point.
#[derive(Debug, Clone)]
pub struct ChainLevel {
    pub base_point: usize,
    pub generators: Vec<Permutation>,
    pub orbit: Vec<usize>,
    transversal: Vec<Option<(Permutation, Permutation)>>,
    checked: HashSet<(usize, usize)>,
}

impl ChainLevel {
    fn new(base_point: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base_point] = Some((Permutation::identity(degree), Permutation::identity(degree)));
        ChainLevel { base_point, generators: Vec::new(), orbit: vec![base_point], transversal, checked: HashSet::new() }
    }

    /// Transversal element mapping the base point to `point`.
    pub fn coset_rep(&self, point: usize) -> Option<&Permutation> {
        self.transversal[point].as_ref().map(|(u, _)| u)
    }

    fn coset_rep_inv(&self, point: usize) -> Option<&Permutation> {
        self.transversal[point].as_ref().map(|(_, ui)| ui)
    }

    fn add_generator(&mut self, g: Permutation) {
        self.generators.push(g);
        let gi = self.generators.len() - 1;
        // existing points under the new generator, then closure under all
        let mut queue: Vec<usize> = Vec::new();
        let existing = self.orbit.clone();
        for b in existing {
            self.visit(b, gi, &mut queue);
        }
        while let Some(b) = queue.pop() {
            for s in 0..self.generators.len() {
                self.visit(b, s, &mut queue);
            }
        }
    }

    fn visit(&mut self, b: usize, s: usize, queue: &mut Vec<usize>) {
        let gen = &self.generators[s];
        let c = gen.apply(b);
        if self.transversal[c].is_none() {
            let u = self.coset_rep(b).unwrap().then(gen);
            let ui = u.inverse();
            self.transversal[c] = Some((u, ui));
            self.orbit.push(c);
            queue.push(c);
        }
    }
}

/// Base and strong generating set, built by deterministic Schreier–Sims.
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<ChainLevel>,
}

impl StabChain {
    /// Builds a chain whose base starts with `base_prefix`; further base
    /// points are the lowest points moved by the sifted residues.
    pub fn new(degree: usize, generators: &[Permutation], base_prefix: &[usize]) -> Self {
        let gens: Vec<Permutation> = generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<usize> = base_prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g.fixes(b)) {
                base.push(g.first_moved_point().unwrap());
            }
        }
        let mut levels: Vec<ChainLevel> = base.iter().map(|&b| ChainLevel::new(b, degree)).collect();
        for g in &gens {
            for (i, level) in levels.iter_mut().enumerate() {
                if base[..i].iter().all(|&b| g.fixes(b)) {
                    level.add_generator(g.clone());
                }
            }
        }
        let mut chain = StabChain { degree, levels };
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let level = i as usize;
            let mut oi = 0;
            while oi < self.levels[level].orbit.len() {
                let beta = self.levels[level].orbit[oi];
                for s in 0..self.levels[level].generators.len() {
                    if !self.levels[level].checked.insert((beta, s)) {
                        continue;
                    }
                    let lv = &self.levels[level];
                    let gen = &lv.generators[s];
                    let image = gen.apply(beta);
                    let schreier = lv.coset_rep(beta).unwrap().then(gen).then(lv.coset_rep_inv(image).unwrap());
                    let (residue, depth) = self.strip_from(&schreier, level + 1);
                    if depth < self.levels.len() || !residue.is_identity() {
                        if depth == self.levels.len() {
                            let point = residue.first_moved_point().unwrap();
                            self.levels.push(ChainLevel::new(point, self.degree));
                        }
                        for l in level + 1..=depth {
                            self.levels[l].add_generator(residue.clone());
                        }
                        i = depth as isize;
                        continue 'outer;
                    }
                }
                oi += 1;
            }
            i -= 1;
        }
    }

    /// Sifts `g` starting at `start`; returns the residue and the level at
    /// which sifting stopped (`levels.len()` if it passed every level).
    fn strip_from(&self, g: &Permutation, start: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let b = h.apply(level.base_point);
            match level.coset_rep_inv(b) {
                Some(ui) => h = h.then(ui),
                None => return (h, l),
            }
        }
        (h, self.levels.len())
    }

    pub fn strip(&self, g: &Permutation) -> (Permutation, usize) {
        self.strip_from(g, 0)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, depth) = self.strip(g);
        depth == self.levels.len() && h.is_identity()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn levels(&self) -> &[ChainLevel] {
        &self.levels
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut seen = HashSet::new();
        self.levels
            .iter()
            .flat_map(|l| l.generators.iter())
            .filter(|g| seen.insert((*g).clone()))
            .cloned()
            .collect()
    }
}

/// A finitely generated permutation group; the stabilizer chain is built
/// on first use and then shared read-only.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup { degree: self.degree, generators: self.generators.clone(), chain }
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
        Ok(PermGroup { degree, generators, chain: OnceLock::new() })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), chain: OnceLock::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::new(self.degree, &self.generators, &[]))
    }

    /// A fresh chain whose base begins with `prefix`.
    pub fn chain_with_base(&self, prefix: &[usize]) -> StabChain {
        StabChain::new(self.degree, &self.generators, prefix)
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    /// Order as a machine integer, if it fits.
    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(self.order()).ok()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.chain().contains(p)
    }

    /// Orbit partition, each orbit sorted, orbits ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators)
    }

    pub fn orbit_of(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    pub fn is_transitive_on(&self, points: &[usize]) -> bool {
        match points.first() {
            None => true,
            Some(&p) => {
                let mut sorted = points.to_vec();
                sorted.sort_unstable();
                self.orbit_of(p) == sorted
            }
        }
    }

    pub fn preserves_set(&self, points: &[usize]) -> bool {
        let mut member = vec![false; self.degree];
        for &p in points {
            member[p] = true;
        }
        self.generators.iter().all(|g| points.iter().all(|&p| member[g.apply(p)]))
    }

    /// Whether the group acts regularly on the invariant set `points`:
    /// transitive there and of order exactly `|points|`.
    pub fn is_regular_on(&self, points: &[usize]) -> Result<bool, PermError> {
        if let Some(&p) = points.iter().find(|&&p| p >= self.degree) {
            return Err(PermError::PointOutOfRange(p));
        }
        if !self.preserves_set(points) {
            return Err(PermError::NotInvariant);
        }
        Ok(self.is_transitive_on(points) && self.order() == BigUint::from(points.len()))
    }

    /// Every element, by closure under the generators; `None` if the group
    /// has more than `cap` elements. Test oracle for the chain.
    pub fn enumerate_elements(&self, cap: usize) -> Option<Vec<Permutation>> {
        closure(self.degree, &self.generators, cap)
    }
}

pub fn orbits_of(degree: usize, generators: &[Permutation]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..degree).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in generators {
        for x in 0..degree {
            let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; degree];
    for x in 0..degree {
        let root = find(&mut parent, x);
        if index[root] == usize::MAX {
            index[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[root]].push(x);
    }
    groups
}

/// All elements generated by `generators`, or `None` past `cap` elements.
pub fn closure(degree: usize, generators: &[Permutation], cap: usize) -> Option<Vec<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut elems = vec![id];
    let mut i = 0;
    while i < elems.len() {
        for g in generators {
            let h = elems[i].then(g);
            if !seen.contains(&h) {
                if elems.len() >= cap {
                    return None;
                }
                seen.insert(h.clone());
                elems.push(h);
            }
        }
        i += 1;
    }
    Some(elems)
}
