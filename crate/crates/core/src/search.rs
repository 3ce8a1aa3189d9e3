//! Automorphism groups and canonical forms by partition refinement and
//! backtracking.
//!
//! The search tree individualizes one vertex of the first smallest
//! non-singleton cell per level and refines to an equitable partition.
//! Each refinement step feeds a label-invariant hash into the node's
//! trace. Leaves are ordered by (trace sequence, relabeled adjacency
//! matrix); the least leaf is the canonical one. Automorphisms come from
//! leaves whose relabeled graph equals that of the first or the best leaf.
//! Pruning uses orbits of known automorphisms fixing the current prefix,
//! trace comparison against the best path, and a jump back to the common
//! ancestor whenever an automorphism is found.

use std::cmp::Ordering;
use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{bipartition, girth, Graph};
use crate::graph6::encode_graph6;
use crate::perm::{PermGroup, Permutation};

/// Hard cap on the vertex count for [`brute_force_automorphisms`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("brute force is limited to {max} vertices, graph has {n}")]
    TooLarge { n: usize, max: usize },
}

/// Canonical relabeling of a graph and the graph6 encoding of the result.
/// Certificates compare by encoding only, so equal certificates mean
/// isomorphic graphs whatever relabeling reached them.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// graph6 bytes of the canonically relabeled graph.
    pub encoding: Vec<u8>,
    /// Vertex `v` of the input becomes vertex `relabeling(v)` of the
    /// canonical graph.
    pub relabeling: Permutation,
}

impl PartialEq for Certificate {
    fn eq(&self, other: &Self) -> bool {
        self.encoding == other.encoding
    }
}

impl Eq for Certificate {}

impl std::hash::Hash for Certificate {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.encoding.hash(state);
    }
}

impl Certificate {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.encoding).expect("graph6 is ASCII")
    }
}

/// Result of one search: generators of Aut(Γ) and the canonical labeling.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub generators: Vec<Permutation>,
    pub certificate: Certificate,
    /// Individualized vertices along the first path (a base for Aut(Γ)).
    pub base: Vec<usize>,
}

pub fn automorphism_group(graph: &Graph) -> PermGroup {
    let result = search(graph);
    PermGroup::new(graph.order(), result.generators).expect("generators have the graph's degree")
}

pub fn canonical_form(graph: &Graph) -> Certificate {
    search(graph).certificate
}

/// Isomorphism by certificate equality, after a cheap invariant screen
/// (order, size, degree sequence, girth, bipartiteness).
pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.order() != b.order() || a.edge_count() != b.edge_count() || a.degree_sequence() != b.degree_sequence() {
        return false;
    }
    if bipartition(a).is_some() != bipartition(b).is_some() || girth(a) != girth(b) {
        return false;
    }
    canonical_form(a).encoding == canonical_form(b).encoding
}

/// An explicit isomorphism `a -> b` if one exists.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<Permutation> {
    if a.order() != b.order() {
        return None;
    }
    let (ca, cb) = (canonical_form(a), canonical_form(b));
    (ca.encoding == cb.encoding).then(|| ca.relabeling.then(&cb.relabeling.inverse()))
}

/// Every automorphism by exhaustive enumeration of all n! bijections.
/// The returned group is generated by a small subset of them.
pub fn brute_force_automorphisms(graph: &Graph) -> Result<PermGroup, SearchError> {
    let all = brute_force_automorphism_list(graph)?;
    let n = graph.order();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut generated: HashSet<Permutation> = HashSet::from([Permutation::identity(n)]);
    for p in all {
        if generated.contains(&p) {
            continue;
        }
        gens.push(p);
        let elems = crate::perm::closure(n, &gens, usize::MAX).expect("no cap");
        generated = elems.into_iter().collect();
    }
    Ok(PermGroup::new(n, gens).expect("same degree"))
}

/// The full automorphism list by brute force (identity first).
pub fn brute_force_automorphism_list(graph: &Graph) -> Result<Vec<Permutation>, SearchError> {
    let n = graph.order();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(SearchError::TooLarge { n, max: BRUTE_FORCE_MAX_VERTICES });
    }
    let edges: Vec<(usize, usize)> = graph.edges().collect();
    let mut images: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        if edges.iter().all(|&(u, v)| graph.has_edge(images[u], images[v])) {
            out.push(Permutation::from_images(images.clone()).unwrap());
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    // splitmix64 finalizer over the running state
    let mut z = h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Ordered partition: cells are contiguous ranges of `lab`.
#[derive(Clone)]
struct Partition {
    lab: Vec<usize>,
    /// Start position of the cell containing each vertex.
    cell_of: Vec<usize>,
    /// For a cell starting at position `s`, `cell_end[s]` is its end.
    cell_end: Vec<usize>,
    cells: usize,
}

impl Partition {
    fn unit(n: usize) -> Self {
        Partition { lab: (0..n).collect(), cell_of: vec![0; n], cell_end: vec![n; n.max(1)], cells: usize::from(n > 0) }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    fn cell_starts(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.lab.len();
        let mut s = 0;
        std::iter::from_fn(move || {
            if s >= n {
                return None;
            }
            let cur = s;
            s = self.cell_end[cur];
            Some(cur)
        })
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> Option<usize> {
        self.cell_starts()
            .filter(|&s| self.cell_end[s] - s > 1)
            .min_by_key(|&s| (self.cell_end[s] - s, s))
    }
}

struct Refiner<'a> {
    adj: &'a [Vec<usize>],
    count: Vec<usize>,
    touched: Vec<usize>,
    in_queue: Vec<bool>,
}

impl<'a> Refiner<'a> {
    fn new(graph: &'a Graph, adj: &'a [Vec<usize>]) -> Self {
        let n = graph.order();
        Refiner { adj, count: vec![0; n], touched: Vec::new(), in_queue: vec![false; n.max(1)] }
    }

    /// Refines `p` to the coarsest equitable partition finer than it,
    /// starting from the splitter cells in `queue`. Returns a trace hash.
    fn refine(&mut self, p: &mut Partition, initial: &[usize]) -> u64 {
        let mut queue: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        for &s in initial {
            if !self.in_queue[s] {
                self.in_queue[s] = true;
                queue.push_back(s);
            }
        }
        let mut trace = 0x243f_6a88_85a3_08d3u64;
        let mut touched_cells: Vec<usize> = Vec::new();
        let mut buf: Vec<(usize, usize)> = Vec::new();
        while let Some(w) = queue.pop_front() {
            self.in_queue[w] = false;
            if p.is_discrete() {
                continue;
            }
            let w_end = p.cell_end[w];
            for pos in w..w_end {
                let x = p.lab[pos];
                for &y in &self.adj[x] {
                    if self.count[y] == 0 {
                        self.touched.push(y);
                    }
                    self.count[y] += 1;
                }
            }
            touched_cells.clear();
            for &y in &self.touched {
                touched_cells.push(p.cell_of[y]);
            }
            touched_cells.sort_unstable();
            touched_cells.dedup();
            trace = mix(trace, w as u64);
            for &x_start in &touched_cells {
                let x_end = p.cell_end[x_start];
                if x_end - x_start == 1 {
                    trace = mix(trace, (x_start as u64) << 20 | self.count[p.lab[x_start]] as u64);
                    continue;
                }
                buf.clear();
                buf.extend(p.lab[x_start..x_end].iter().map(|&v| (self.count[v], v)));
                buf.sort_unstable();
                let distinct = buf.windows(2).filter(|w| w[0].0 != w[1].0).count() + 1;
                trace = mix(trace, (x_start as u64) << 32 | (distinct as u64) << 16 | buf[0].0 as u64);
                if distinct == 1 {
                    continue;
                }
                let was_queued = self.in_queue[x_start];
                let mut frag_start = x_start;
                for (i, &(c, v)) in buf.iter().enumerate() {
                    let pos = x_start + i;
                    p.lab[pos] = v;
                    if i > 0 && c != buf[i - 1].0 {
                        p.cell_end[frag_start] = pos;
                        trace = mix(trace, (pos - frag_start) as u64 ^ (buf[i - 1].0 as u64) << 24);
                        frag_start = pos;
                        p.cells += 1;
                    }
                    p.cell_of[v] = frag_start;
                }
                p.cell_end[frag_start] = x_end;
                trace = mix(trace, (x_end - frag_start) as u64 ^ (buf[buf.len() - 1].0 as u64) << 24);
                // queue every fragment; the first keeps x_start and is
                // already queued if x was
                let mut s = x_start;
                while s < x_end {
                    if !(s == x_start && was_queued) && !self.in_queue[s] {
                        self.in_queue[s] = true;
                        queue.push_back(s);
                    }
                    s = p.cell_end[s];
                }
            }
            for &y in &self.touched {
                self.count[y] = 0;
            }
            self.touched.clear();
        }
        for s in queue {
            self.in_queue[s] = false;
        }
        trace
    }

    /// Splits `v` off the front of its cell and refines.
    fn individualize(&mut self, p: &mut Partition, v: usize) -> u64 {
        let s = p.cell_of[v];
        let end = p.cell_end[s];
        let pos = p.lab[s..end].iter().position(|&x| x == v).unwrap() + s;
        p.lab.swap(s, pos);
        p.cell_end[s] = s + 1;
        p.cell_end[s + 1] = end;
        for i in s + 1..end {
            p.cell_of[p.lab[i]] = s + 1;
        }
        p.cell_of[v] = s;
        p.cells += 1;
        mix(self.refine(p, &[s]), (s as u64) << 8 | (end - s) as u64)
    }
}

#[derive(Clone)]
struct Leaf {
    lab: Vec<usize>,
    graph: Vec<u64>,
    traces: Vec<u64>,
    path: Vec<usize>,
}

struct Searcher<'a> {
    n: usize,
    words: usize,
    adj: &'a [Vec<usize>],
    refiner: Refiner<'a>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Permutation>,
    /// Individualized vertices from the root to the current node.
    path: Vec<usize>,
    /// `traces[0]` is the root refinement; `traces[k]` belongs to `path[k-1]`.
    traces: Vec<u64>,
}

enum Outcome {
    /// Keep exploring siblings.
    Continue,
    /// Unwind to the node at this depth and continue there.
    JumpTo(usize),
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl<'a> Searcher<'a> {
    fn relabeled(&self, lab: &[usize]) -> Vec<u64> {
        let mut pos = vec![0; self.n];
        for (i, &v) in lab.iter().enumerate() {
            pos[v] = i;
        }
        let mut bits = vec![0u64; self.n * self.words];
        for (i, &v) in lab.iter().enumerate() {
            let row = &mut bits[i * self.words..(i + 1) * self.words];
            for &w in &self.adj[v] {
                let j = pos[w];
                row[j / 64] |= 1u64 << (63 - j % 64);
            }
        }
        bits
    }

    fn common_prefix(a: &[usize], b: &[usize]) -> usize {
        a.iter().zip(b).take_while(|(x, y)| x == y).count()
    }

    fn record_automorphism(&mut self, from_lab: &[usize], to_lab: &[usize]) {
        let mut images = vec![0; self.n];
        for i in 0..self.n {
            images[from_lab[i]] = to_lab[i];
        }
        let gamma = Permutation::from_images(images).expect("leaf labelings are bijections");
        if !gamma.is_identity() {
            self.generators.push(gamma);
        }
    }

    fn leaf(&mut self, p: &Partition) -> Outcome {
        let leaf = Leaf { lab: p.lab.clone(), graph: self.relabeled(&p.lab), traces: self.traces.clone(), path: self.path.clone() };
        let Some(first) = &self.first else {
            self.best = Some(leaf.clone());
            self.first = Some(leaf);
            return Outcome::Continue;
        };
        if first.traces == leaf.traces && first.graph == leaf.graph {
            let (from, jump) = (first.lab.clone(), Self::common_prefix(&first.path, &leaf.path));
            self.record_automorphism(&from, &leaf.lab);
            return Outcome::JumpTo(jump);
        }
        let best = self.best.as_ref().unwrap();
        match leaf.traces.cmp(&best.traces).then_with(|| leaf.graph.cmp(&best.graph)) {
            Ordering::Equal => {
                let (from, jump) = (best.lab.clone(), Self::common_prefix(&best.path, &leaf.path));
                self.record_automorphism(&from, &leaf.lab);
                Outcome::JumpTo(jump)
            }
            Ordering::Less => {
                self.best = Some(leaf);
                Outcome::Continue
            }
            Ordering::Greater => Outcome::Continue,
        }
    }

    /// Whether the current node can still lead to an automorphism or a
    /// better leaf: its traces agree with the first path, or are not worse
    /// than the best path's.
    fn viable(&self) -> bool {
        let Some(first) = &self.first else { return true };
        let depth = self.traces.len();
        if first.traces.len() >= depth && first.traces[..depth] == self.traces[..] {
            return true;
        }
        let best = &self.best.as_ref().unwrap().traces;
        let k = depth.min(best.len());
        self.traces[..k] <= best[..k]
    }

    /// Union-find over the orbits of the known automorphisms that fix the
    /// current path pointwise.
    fn prefix_orbits(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        for g in self.generators.iter().filter(|g| self.path.iter().all(|&v| g.fixes(v))) {
            for x in 0..self.n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        parent
    }

    fn explore(&mut self, p: Partition) -> Outcome {
        if p.is_discrete() {
            return self.leaf(&p);
        }
        let depth = self.path.len();
        let target = p.target_cell().expect("non-discrete partition has a target cell");
        let mut cell: Vec<usize> = p.lab[target..p.cell_end[target]].to_vec();
        cell.sort_unstable();
        let mut explored_roots: Vec<usize> = Vec::new();
        let mut explored: Vec<usize> = Vec::new();
        let mut known = usize::MAX;
        let mut orbits: Vec<usize> = Vec::new();
        for &v in &cell {
            if known != self.generators.len() {
                known = self.generators.len();
                orbits = self.prefix_orbits();
                explored_roots = explored.iter().map(|&u| find(&mut orbits, u)).collect();
            }
            let root = find(&mut orbits, v);
            if explored_roots.contains(&root) {
                continue;
            }
            explored.push(v);
            explored_roots.push(root);
            let mut child = p.clone();
            let t = self.refiner.individualize(&mut child, v);
            self.path.push(v);
            self.traces.push(t);
            let outcome = if self.viable() { self.explore(child) } else { Outcome::Continue };
            self.path.pop();
            self.traces.pop();
            if let Outcome::JumpTo(level) = outcome {
                if level < depth {
                    return outcome;
                }
            }
        }
        Outcome::Continue
    }
}

/// Runs the search once, returning automorphism generators and the
/// canonical certificate.
pub fn search(graph: &Graph) -> SearchResult {
    let n = graph.order();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| graph.neighbors(v).to_vec()).collect();
    let mut searcher = Searcher {
        n,
        words: n.div_ceil(64).max(1),
        adj: &adj,
        refiner: Refiner::new(graph, &adj),
        first: None,
        best: None,
        generators: Vec::new(),
        path: Vec::new(),
        traces: Vec::new(),
    };
    let mut root = Partition::unit(n);
    let t = if n > 0 { searcher.refiner.refine(&mut root, &[0]) } else { 0 };
    searcher.traces.push(t);
    searcher.explore(root);
    let best = searcher.best.take().expect("search reaches at least one leaf");
    let base = searcher.first.map(|f| f.path).unwrap_or_default();
    let mut relabel = vec![0; n];
    for (i, &v) in best.lab.iter().enumerate() {
        relabel[v] = i;
    }
    let relabeling = Permutation::from_images(relabel).expect("canonical labeling is a bijection");
    let canonical = graph.relabel(&relabeling).expect("same degree");
    SearchResult {
        generators: searcher.generators,
        certificate: Certificate { encoding: encode_graph6(&canonical).expect("graph6 size limit"), relabeling },
        base,
    }
}
