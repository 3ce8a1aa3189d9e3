//! Search for semiregular subgroups with a prescribed orbit.
//!
//! A subgroup `R ≤ A` whose orbit of `base` is the target set `X`, with all
//! non-identity elements fixed-point-free on every point, is built by
//! depth-first search. Each step takes the least point `p ∈ X` outside the
//! current orbit, tries every `g ∈ A` with `base^g = p`, and closes
//! `⟨H, g⟩` explicitly. Candidates are enumerated through the stabilizer
//! chain one base point at a time, so the requirement `x^g ∉ x^H` prunes
//! partial products early. The search is exhaustive, so `None` certifies
//! that no such subgroup exists.

use std::collections::HashSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::perm::{PermGroup, Permutation, StabChain};

/// Explicit semiregular group: its elements indexed by the image of `base`.
struct Semiregular {
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
    /// H-orbit id of every point.
    orbit_id: Vec<usize>,
    /// Points in the orbit of the base point.
    covered: Vec<bool>,
}

impl Semiregular {
    fn trivial(degree: usize, base: usize) -> Self {
        Semiregular {
            elements: vec![Permutation::identity(degree)],
            generators: Vec::new(),
            orbit_id: (0..degree).collect(),
            covered: (0..degree).map(|x| x == base).collect(),
        }
    }

    fn key(&self) -> Vec<u32> {
        let mut elems: Vec<&Permutation> = self.elements.iter().collect();
        elems.sort();
        elems.iter().flat_map(|p| p.images().iter().map(|&x| x as u32)).collect()
    }
}

/// The images of `g` fixed so far. A semiregular element has all cycles
/// of one length, which must divide `|X|`.
struct PartialMap {
    image: Vec<usize>,
    preimage: Vec<usize>,
    cycle_len: Option<usize>,
}

impl PartialMap {
    fn new(degree: usize) -> Self {
        PartialMap { image: vec![usize::MAX; degree], preimage: vec![usize::MAX; degree], cycle_len: None }
    }

    /// Records `x -> y`; `None` if the cycle structure can no longer be
    /// uniform. Returns the previous cycle length for [`PartialMap::undo`].
    fn assign(&mut self, x: usize, y: usize, group_order: usize) -> Option<Option<usize>> {
        debug_assert_eq!(self.image[x], usize::MAX, "base points are assigned once");
        let saved = self.cycle_len;
        let mut len = 1;
        let mut z = y;
        while z != x && self.image[z] != usize::MAX {
            z = self.image[z];
            len += 1;
        }
        if z == x {
            match self.cycle_len {
                Some(c) if c != len => return None,
                _ if len < 2 || group_order % len != 0 => return None,
                _ => self.cycle_len = Some(len),
            }
        } else {
            let mut w = x;
            while self.preimage[w] != usize::MAX {
                w = self.preimage[w];
                len += 1;
            }
            if self.cycle_len.is_some_and(|c| len >= c) || len >= group_order {
                return None;
            }
        }
        self.image[x] = y;
        self.preimage[y] = x;
        Some(saved)
    }

    fn undo(&mut self, x: usize, y: usize, saved: Option<usize>) {
        self.image[x] = usize::MAX;
        self.preimage[y] = usize::MAX;
        self.cycle_len = saved;
    }
}

struct RegularSearch<'a> {
    degree: usize,
    base: usize,
    target: &'a [bool],
    target_size: usize,
    chain: &'a StabChain,
    visited: HashSet<Vec<u32>>,
    nodes: u64,
    budget: u64,
}

impl<'a> RegularSearch<'a> {
    /// Closes `⟨H, g⟩`; `None` if it is not semiregular, leaves the target,
    /// or its order cannot divide `|X|`.
    fn extend(&self, h: &Semiregular, g: &Permutation) -> Option<Semiregular> {
        let mut gens = h.generators.clone();
        gens.push(g.clone());
        let mut by_image: Vec<Option<usize>> = vec![None; self.degree];
        let mut elements = vec![Permutation::identity(self.degree)];
        by_image[self.base] = Some(0);
        let mut i = 0;
        while i < elements.len() {
            for s in &gens {
                let e = elements[i].then(s);
                let img = e.apply(self.base);
                match by_image[img] {
                    Some(j) => {
                        if elements[j] != e {
                            return None;
                        }
                    }
                    None => {
                        if !self.target[img] || elements.len() == self.target_size || e.has_fixed_point() {
                            return None;
                        }
                        by_image[img] = Some(elements.len());
                        elements.push(e);
                    }
                }
            }
            i += 1;
        }
        if self.target_size % elements.len() != 0 {
            return None;
        }
        let mut orbit_id = vec![usize::MAX; self.degree];
        for x in 0..self.degree {
            if orbit_id[x] == usize::MAX {
                for e in &elements {
                    orbit_id[e.apply(x)] = x;
                }
            }
        }
        let covered = by_image.iter().map(Option::is_some).collect();
        Some(Semiregular { elements, generators: gens, orbit_id, covered })
    }

    fn run(&mut self, h: Semiregular) -> Option<Vec<Permutation>> {
        if h.elements.len() == self.target_size {
            return Some(h.generators);
        }
        let p = (0..self.degree).find(|&x| self.target[x] && !h.covered[x])?;
        let top = self.chain.levels()[0].coset_rep(p)?.clone();
        let mut partial = PartialMap::new(self.degree);
        partial.assign(self.base, p, self.target_size)?;
        self.descend(&h, 1, top, &mut partial)
    }

    /// Walks every `g = u_{k-1} ⋯ u_1 · prefix` (apply left first), pruning
    /// at each base point, and recurses into the first that succeeds.
    fn descend(
        &mut self,
        h: &Semiregular,
        level: usize,
        prefix: Permutation,
        partial: &mut PartialMap,
    ) -> Option<Vec<Permutation>> {
        let chain = self.chain;
        let levels = chain.levels();
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        if level == levels.len() {
            if !self.admissible(h, &prefix) {
                return None;
            }
            let k = self.extend(h, &prefix)?;
            if !self.visited.insert(k.key()) {
                return None;
            }
            return self.run(k);
        }
        let lv = &levels[level];
        let x = lv.base_point;
        for &b in &lv.orbit {
            let y = prefix.apply(b);
            if h.orbit_id[y] == h.orbit_id[x] || self.target[x] != self.target[y] {
                continue;
            }
            let Some(saved) = partial.assign(x, y, self.target_size) else { continue };
            let u = lv.coset_rep(b).unwrap();
            let found = self.descend(h, level + 1, u.then(&prefix), partial);
            partial.undo(x, y, saved);
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn admissible(&self, h: &Semiregular, g: &Permutation) -> bool {
        (0..self.degree).all(|x| {
            let y = g.apply(x);
            h.orbit_id[y] != h.orbit_id[x] && self.target[x] == self.target[y]
        })
    }
}

/// Finds generators of a subgroup of `group` that is semiregular on all
/// points and whose orbit through `target[0]` is exactly `target`
/// (which it then preserves). `None` certifies that none exists.
pub fn find_semiregular_with_orbit(group: &PermGroup, target: &[usize]) -> Option<Vec<Permutation>> {
    match semiregular_search(group, target, u64::MAX) {
        SearchOutcome::Found(gens) => Some(gens),
        _ => None,
    }
}

/// Result of a search that may stop early.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Vec<Permutation>),
    Absent,
    /// The node budget ran out before the search finished.
    GaveUp,
}

/// [`find_regular_subgroup`] that gives up after visiting `budget` search
/// nodes.
pub fn find_regular_subgroup_within(group: &PermGroup, points: &[usize], budget: u64) -> SearchOutcome {
    semiregular_search(group, points, budget)
}

fn semiregular_search(group: &PermGroup, target: &[usize], budget: u64) -> SearchOutcome {
    let degree = group.degree();
    let Some(&base) = target.iter().min() else { return SearchOutcome::Absent };
    let mut member = vec![false; degree];
    for &x in target {
        member[x] = true;
    }
    let target_size = member.iter().filter(|&&b| b).count();
    let orbit = group.orbit_of(base);
    if !target.iter().all(|&x| orbit.binary_search(&x).is_ok()) {
        return SearchOutcome::Absent;
    }
    if target_size == 1 {
        return SearchOutcome::Found(Vec::new());
    }
    let chain = group.chain_with_base(&[base]);
    run_search(&chain, degree, base, &member, target_size, budget, Semiregular::trivial(degree, base))
}

fn run_search(
    chain: &StabChain,
    degree: usize,
    base: usize,
    member: &[bool],
    target_size: usize,
    budget: u64,
    start: Semiregular,
) -> SearchOutcome {
    let found = |g: Option<Vec<Permutation>>| g.map_or(SearchOutcome::Absent, SearchOutcome::Found);
    let mut search = RegularSearch {
        degree,
        base,
        target: member,
        target_size,
        chain,
        visited: HashSet::new(),
        nodes: 0,
        budget,
    };
    let result = search.run(start);
    if result.is_none() && search.nodes > budget {
        return SearchOutcome::GaveUp;
    }
    found(result)
}

/// A subgroup of `group` acting regularly on `points` (all of which must
/// be moved within one orbit), as generators; `None` if there is none.
pub fn find_regular_subgroup(group: &PermGroup, points: &[usize]) -> Option<Vec<Permutation>> {
    find_semiregular_with_orbit(group, points)
}

/// Uniformly random element: one random coset representative per level.
fn random_element(chain: &StabChain, rng: &mut impl Rng) -> Permutation {
    let mut g = Permutation::identity(chain.degree());
    for lv in chain.levels().iter().rev() {
        let b = lv.orbit[rng.gen_range(0..lv.orbit.len())];
        g = g.then(lv.coset_rep(b).unwrap());
    }
    g
}

/// Whether every cycle of `g` has the same length `> 1`.
fn semiregular_cycle_length(g: &Permutation) -> Option<usize> {
    let cycles = g.cycles();
    let len = cycles.first()?.len();
    let covered: usize = cycles.iter().map(Vec::len).sum();
    (covered == g.degree() && len > 1 && cycles.iter().all(|c| c.len() == len)).then_some(len)
}

/// Looks for a regular subgroup of a transitive `group` by sampling random
/// elements. A full cycle is returned directly, an element with two cycles
/// is extended through its normalizer, and other semiregular elements seed
/// a short search. `None` proves nothing.
pub fn sample_regular_subgroup(group: &PermGroup, samples: usize, seed_budget: u64) -> Option<Vec<Permutation>> {
    let degree = group.degree();
    if degree < 2 {
        return None;
    }
    let chain = group.chain_with_base(&[0]);
    let member = vec![true; degree];
    let mut rng = StdRng::seed_from_u64(0x5eed_0f_ca11e7);
    let mut seeds: Vec<(usize, Permutation)> = Vec::new();
    let mut halves = 0;
    for _ in 0..samples {
        let g = random_element(&chain, &mut rng);
        let Some(len) = semiregular_cycle_length(&g) else { continue };
        if len == degree {
            return Some(vec![g]);
        }
        if 2 * len == degree && halves < MAX_HALF_CYCLE_TRIALS {
            halves += 1;
            if let Some(found) = extend_by_normalizer(group, std::slice::from_ref(&g)) {
                return Some(found);
            }
        }
        if degree % len == 0 && !seeds.iter().any(|(l, _)| *l == len) {
            seeds.push((len, g));
        }
    }
    seeds.sort_by_key(|(len, _)| std::cmp::Reverse(*len));
    for (_, g) in seeds {
        let start = Semiregular::trivial(degree, 0);
        let probe = RegularSearch {
            degree,
            base: 0,
            target: &member,
            target_size: degree,
            chain: &chain,
            visited: HashSet::new(),
            nodes: 0,
            budget: 0,
        };
        let Some(h) = probe.extend(&start, &g) else { continue };
        if let SearchOutcome::Found(gens) = run_search(&chain, degree, 0, &member, degree, seed_budget, h) {
            return Some(gens);
        }
    }
    None
}

/// Distinct two-cycle elements tried by [`sample_regular_subgroup`].
const MAX_HALF_CYCLE_TRIALS: usize = 32;

/// A subgroup of `group` transitive on all points whose point stabilizers
/// have order dividing `t`, by exhaustive search over explicit closures.
/// With `t = 1` this asks for a regular subgroup, but
/// [`find_regular_subgroup`] prunes far better in that case.
pub fn find_transitive_subgroup(group: &PermGroup, t: usize) -> Option<Vec<Permutation>> {
    let degree = group.degree();
    if degree == 0 || group.orbit_of(0).len() != degree {
        return None;
    }
    let limit = degree * t;
    let chain = group.chain_with_base(&[0]);
    let mut visited = HashSet::new();
    transitive_dfs(&chain, &[], limit, t, &mut visited)
}

fn transitive_dfs(
    chain: &StabChain,
    gens: &[Permutation],
    limit: usize,
    t: usize,
    visited: &mut HashSet<Vec<u32>>,
) -> Option<Vec<Permutation>> {
    let degree = chain.degree();
    let elements = crate::perm::closure(degree, gens, limit)?;
    let stabilizer = elements.iter().filter(|e| e.fixes(0)).count();
    if limit % elements.len() != 0 || t % stabilizer != 0 {
        return None;
    }
    let mut orbit: Vec<usize> = elements.iter().map(|e| e.apply(0)).collect();
    orbit.sort_unstable();
    orbit.dedup();
    if orbit.len() == degree {
        return Some(gens.to_vec());
    }
    let mut key: Vec<&Permutation> = elements.iter().collect();
    key.sort();
    if !visited.insert(key.iter().flat_map(|p| p.images().iter().map(|&x| x as u32)).collect()) {
        return None;
    }
    let p = (0..degree).find(|x| orbit.binary_search(x).is_err())?;
    let top = chain.levels()[0].coset_rep(p)?.clone();
    let mut candidates = Vec::new();
    stabilizer_products(chain, 1, top, &mut candidates);
    for g in candidates {
        let mut next = gens.to_vec();
        next.push(g);
        if let Some(found) = transitive_dfs(chain, &next, limit, t, visited) {
            return Some(found);
        }
    }
    None
}

fn stabilizer_products(chain: &StabChain, level: usize, prefix: Permutation, out: &mut Vec<Permutation>) {
    let levels = chain.levels();
    if level == levels.len() {
        out.push(prefix);
        return;
    }
    let lv = &levels[level];
    for &b in &lv.orbit {
        let u = lv.coset_rep(b).unwrap();
        stabilizer_products(chain, level + 1, u.then(&prefix), out);
    }
}

/// Cap on the automorphisms of `H` tried by [`extend_by_normalizer`].
const MAX_HOMOMORPHISM_CANDIDATES: usize = 1 << 16;

/// Given a group `H = ⟨h⟩` acting semiregularly with two orbits, finds
/// `g ∈ group` with `⟨H, g⟩` regular. Such an overgroup has index two, so
/// `g` normalizes `H` and is fixed by an automorphism `φ` of `H` together
/// with the images of one point in each orbit. `None` is exact unless the
/// candidate generator images for `φ` exceed an internal cap.
pub fn extend_by_normalizer(group: &PermGroup, h: &[Permutation]) -> Option<Vec<Permutation>> {
    let degree = group.degree();
    if degree < 2 || degree % 2 != 0 {
        return None;
    }
    let half = degree / 2;
    let elements = crate::perm::closure(degree, h, half)?;
    if elements.len() != half || elements.iter().skip(1).any(Permutation::has_fixed_point) {
        return None;
    }
    let b0 = 0;
    let orbit0: Vec<usize> = elements.iter().map(|e| e.apply(b0)).collect();
    let mut in_orbit0 = vec![false; degree];
    for &x in &orbit0 {
        in_orbit0[x] = true;
    }
    let q0 = (0..degree).find(|&x| !in_orbit0[x])?;
    // Index elements by the image of b0, and read products through it.
    let mut index = vec![usize::MAX; degree];
    for (i, e) in elements.iter().enumerate() {
        index[e.apply(b0)] = i;
    }
    let mul = |a: usize, b: usize| index[elements[b].apply(elements[a].apply(b0))];
    let gens = small_generating_set(&elements, &mul);
    let orders: Vec<u64> = elements.iter().map(Permutation::order).collect();
    let choices: Vec<Vec<usize>> =
        gens.iter().map(|&s| (0..half).filter(|&t| orders[t] == orders[s]).collect()).collect();
    let total = choices.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()))?;
    if total > MAX_HOMOMORPHISM_CANDIDATES {
        return None;
    }
    let mut pick = vec![0usize; gens.len()];
    loop {
        let images: Vec<usize> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        if let Some(phi) = extend_homomorphism(half, &gens, &images, &mul) {
            for p in (0..degree).filter(|&x| !in_orbit0[x]) {
                for &p1 in &orbit0 {
                    let mut img = vec![0; degree];
                    for (x, e) in elements.iter().enumerate() {
                        let f = &elements[phi[x]];
                        img[e.apply(b0)] = f.apply(p);
                        img[e.apply(q0)] = f.apply(p1);
                    }
                    let g = Permutation::from_images(img).expect("images form a bijection");
                    if !group.contains(&g) {
                        continue;
                    }
                    let mut all = h.to_vec();
                    all.push(g);
                    if let Some(r) = crate::perm::closure(degree, &all, degree) {
                        if r.len() == degree && r.iter().skip(1).all(|e| !e.has_fixed_point()) {
                            return Some(all);
                        }
                    }
                }
            }
        }
        // Advance the mixed-radix counter.
        let mut i = 0;
        loop {
            if i == pick.len() {
                return None;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Greedy generating set, preferring elements of large order.
fn small_generating_set(elements: &[Permutation], mul: &dyn Fn(usize, usize) -> usize) -> Vec<usize> {
    let n = elements.len();
    let mut by_order: Vec<usize> = (1..n).collect();
    by_order.sort_by_key(|&i| std::cmp::Reverse(elements[i].order()));
    let mut gens = Vec::new();
    let mut inside = vec![false; n];
    inside[0] = true;
    for s in by_order {
        if inside[s] {
            continue;
        }
        gens.push(s);
        let mut span = vec![0];
        inside = vec![false; n];
        inside[0] = true;
        let mut i = 0;
        while i < span.len() {
            for &t in &gens {
                let e = mul(span[i], t);
                if !inside[e] {
                    inside[e] = true;
                    span.push(e);
                }
            }
            i += 1;
        }
    }
    gens
}

/// The automorphism sending `gens[i] -> images[i]`, if one exists.
fn extend_homomorphism(
    n: usize,
    gens: &[usize],
    images: &[usize],
    mul: &dyn Fn(usize, usize) -> usize,
) -> Option<Vec<usize>> {
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    phi[0] = 0;
    used[0] = true;
    let mut queue = vec![0];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        for (&s, &t) in gens.iter().zip(images) {
            let y = mul(x, s);
            let fy = mul(phi[x], t);
            if phi[y] == usize::MAX {
                if used[fy] {
                    return None;
                }
                phi[y] = fy;
                used[fy] = true;
                queue.push(y);
            } else if phi[y] != fy {
                return None;
            }
        }
        i += 1;
    }
    Some(phi)
}
