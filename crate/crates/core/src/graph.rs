//! Simple undirected graphs and the graph families built from groups and
//! voltage assignments.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::groups::{ElementSubset, FiniteGroup};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(usize, usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("connection set contains the identity")]
    IdentityInConnectionSet,
    #[error("connection set is not closed under inverses")]
    NotInverseClosed,
    #[error("connection set must be nonempty")]
    EmptyConnectionSet,
    #[error("subset belongs to a group of order {subset}, not {group}")]
    GroupMismatch { subset: usize, group: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("permutation of degree {0} does not match the graph")]
    DegreeMismatch(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// An undirected simple graph on vertices `0..n` with sorted neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Strict constructor: loops and repeated edges are errors.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        Self::build(n, edges, false)
    }

    /// Like [`Graph::from_edges`] but collapses repeated edges into one.
    pub fn from_edges_merged(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        Self::build(n, edges, true)
    }

    fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, merge: bool) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange { vertex, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                if !merge {
                    return Err(GraphError::ParallelEdge(u.min(w[0]), u.max(w[0])));
                }
                list.dedup();
            }
        }
        Ok(Graph { adj, labels: None })
    }

    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order());
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    }

    /// Common degree if the graph is regular (and nonempty).
    pub fn regular_valency(&self) -> Option<usize> {
        let d = self.adj.first()?.len();
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Component index per vertex, numbered by smallest member.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let n = self.order();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = count;
            stack.push(root);
            while let Some(x) = stack.pop() {
                for &y in &self.adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.order() <= 1 || self.components().0 == 1
    }

    /// The image graph: vertex `v` becomes `perm(v)`. Labels are dropped.
    pub fn relabel(&self, perm: &Permutation) -> Result<Graph, GraphError> {
        if perm.degree() != self.order() {
            return Err(GraphError::DegreeMismatch(perm.degree()));
        }
        let mut adj = vec![Vec::new(); self.order()];
        for (u, list) in self.adj.iter().enumerate() {
            adj[perm.apply(u)] = list.iter().map(|&v| perm.apply(v)).collect();
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { adj, labels: None })
    }

    pub fn is_automorphism(&self, perm: &Permutation) -> bool {
        perm.degree() == self.order()
            && self.edges().all(|(u, v)| self.has_edge(perm.apply(u), perm.apply(v)))
    }

    /// One line per vertex: `index: sorted neighbors`.
    pub fn to_adjacency_text(&self) -> String {
        let mut out = String::new();
        for (u, list) in self.adj.iter().enumerate() {
            let nbrs: Vec<String> = list.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{u}: {}", nbrs.join(" "));
        }
        out
    }

    pub fn parse_adjacency_text(text: &str) -> Result<Graph, GraphError> {
        let parse_err = |line: usize, message: &str| GraphError::Parse { line, message: message.to_string() };
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let (head, tail) = line.split_once(':').ok_or_else(|| parse_err(i + 1, "missing ':'"))?;
            let idx: usize = head.trim().parse().map_err(|_| parse_err(i + 1, "bad vertex index"))?;
            if idx != rows.len() {
                return Err(parse_err(i + 1, "vertex indices must be consecutive from 0"));
            }
            let nbrs = tail
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| parse_err(i + 1, "bad neighbor")))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(nbrs);
        }
        let n = rows.len();
        let edges: Vec<(usize, usize)> = rows
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| u < v || v >= n)
            .collect();
        let g = Graph::from_edges(n, edges)?;
        for (u, l) in rows.iter().enumerate() {
            let mut l = l.clone();
            l.sort_unstable();
            if l != g.adj[u] {
                return Err(parse_err(u + 1, "adjacency is not symmetric"));
            }
        }
        Ok(g)
    }
}

fn check_subset(group: &FiniteGroup, set: &ElementSubset) -> Result<(), GraphError> {
    if set.group_order() != group.order() {
        return Err(GraphError::GroupMismatch { subset: set.group_order(), group: group.order() });
    }
    Ok(())
}

fn check_symmetric_set(group: &FiniteGroup, set: &ElementSubset) -> Result<(), GraphError> {
    check_subset(group, set)?;
    if set.contains(group.identity()) {
        return Err(GraphError::IdentityInConnectionSet);
    }
    if !set.is_inverse_closed(group) {
        return Err(GraphError::NotInverseClosed);
    }
    Ok(())
}

/// Cay(G, S): vertex set G, edges `{g, s·g}`.
pub fn cayley_graph(group: &FiniteGroup, s: &ElementSubset) -> Result<Graph, GraphError> {
    check_symmetric_set(group, s)?;
    let edges = group
        .elements()
        .flat_map(|g| s.members().iter().map(move |&x| (g, group.mul(x, g))))
        .filter(|&(a, b)| a < b);
    Ok(Graph::from_edges(group.order(), edges)?.with_labels(group.elements().map(|g| g.to_string()).collect()))
}

fn two_block_labels(n: usize) -> Vec<String> {
    (0..2 * n).map(|v| format!("({},{})", v % n, v / n)).collect()
}

/// H(G, S): vertices `(g, 0) = g` and `(g, 1) = |G| + g`, edges
/// `{(g,0), (s·g,1)}`.
pub fn haar_graph(group: &FiniteGroup, s: &ElementSubset) -> Result<Graph, GraphError> {
    check_subset(group, s)?;
    if s.is_empty() {
        return Err(GraphError::EmptyConnectionSet);
    }
    let n = group.order();
    let edges = group
        .elements()
        .flat_map(|g| s.members().iter().map(move |&x| (g, n + group.mul(x, g))));
    Ok(Graph::from_edges(2 * n, edges)?.with_labels(two_block_labels(n)))
}

/// BCay(G, L, R, S) on the same two-block layout as [`haar_graph`]; `L`
/// acts inside block 0 and `R` inside block 1.
pub fn bicayley_graph(
    group: &FiniteGroup,
    left: &ElementSubset,
    right: &ElementSubset,
    cross: &ElementSubset,
) -> Result<Graph, GraphError> {
    check_symmetric_set(group, left)?;
    check_symmetric_set(group, right)?;
    check_subset(group, cross)?;
    let n = group.order();
    let mut edges = Vec::new();
    for g in group.elements() {
        edges.extend(left.members().iter().map(|&l| (g, group.mul(l, g))).filter(|&(a, b)| a < b));
        edges.extend(
            right.members().iter().map(|&r| (n + g, n + group.mul(r, g))).filter(|&(a, b)| a < b),
        );
        edges.extend(cross.members().iter().map(|&s| (g, n + group.mul(s, g))));
    }
    Ok(Graph::from_edges(2 * n, edges)?.with_labels(two_block_labels(n)))
}

/// G(n, r): outer vertices `0..n`, inner vertices `n..2n`.
pub fn generalized_petersen(n: usize, r: usize) -> Result<Graph, GraphError> {
    if n < 3 || r == 0 || r >= n || 2 * r == n {
        return Err(GraphError::InvalidParameters(format!(
            "G({n},{r}) needs n >= 3, 0 < r < n and r != n/2"
        )));
    }
    let mut edges = Vec::with_capacity(3 * n);
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push((i, n + i));
        edges.push((n + i, n + (i + r) % n));
    }
    let labels = (0..n).map(|i| format!("o{i}")).chain((0..n).map(|i| format!("i{i}"))).collect();
    Ok(Graph::from_edges(2 * n, edges)?.with_labels(labels))
}

/// The four vertex families of a double generalized Petersen graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DgpKind {
    U,
    V,
    W,
    Z,
}

impl DgpKind {
    pub const ALL: [DgpKind; 4] = [DgpKind::U, DgpKind::V, DgpKind::W, DgpKind::Z];

    fn block(self) -> usize {
        self as usize
    }

    fn letter(self) -> char {
        match self {
            DgpKind::U => 'u',
            DgpKind::V => 'v',
            DgpKind::W => 'w',
            DgpKind::Z => 'z',
        }
    }
}

/// The three edge classes of D(n, r).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DgpEdgeClass {
    Outer,
    Spoke,
    Inner,
}

/// Vertex layout of D(n, r): u-block `[0,n)`, v-block `[n,2n)`, w-block
/// `[2n,3n)`, z-block `[3n,4n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DgpLabeling {
    pub n: usize,
    pub r: usize,
}

impl DgpLabeling {
    /// Vertex index of `kind_i`; `i` is taken mod n.
    pub fn vertex(&self, kind: DgpKind, i: i64) -> usize {
        kind.block() * self.n + i.rem_euclid(self.n as i64) as usize
    }

    pub fn decode(&self, v: usize) -> (DgpKind, usize) {
        (DgpKind::ALL[v / self.n], v % self.n)
    }

    pub fn label(&self, v: usize) -> String {
        let (kind, i) = self.decode(v);
        format!("{}{}", kind.letter(), i)
    }

    /// Class of the edge `{a, b}` by the defining formulas (`None` if it is
    /// not an edge of D(n, r)).
    pub fn edge_class(&self, a: usize, b: usize) -> Option<DgpEdgeClass> {
        let n = self.n as i64;
        let ((ka, ia), (kb, ib)) = (self.decode(a), self.decode(b));
        let ((ka, ia), (kb, ib)) = if ka <= kb { ((ka, ia), (kb, ib)) } else { ((kb, ib), (ka, ia)) };
        let diff = (ib as i64 - ia as i64).rem_euclid(n);
        let r = self.r as i64 % n;
        use DgpKind::*;
        match (ka, kb) {
            (U, U) | (Z, Z) if diff == 1 || diff == n - 1 => Some(DgpEdgeClass::Outer),
            (U, V) | (W, Z) if diff == 0 => Some(DgpEdgeClass::Spoke),
            (V, W) if diff == r || diff == (n - r) % n => Some(DgpEdgeClass::Inner),
            _ => None,
        }
    }
}

/// D(n, r), the double cover of G(n, r) with nontrivial voltage on the
/// inner edges. For `r = n/2` the two inner edges at each `v_i` coincide
/// and are kept once.
pub fn double_generalized_petersen(n: usize, r: usize) -> Result<(Graph, DgpLabeling), GraphError> {
    if n < 3 || r % n == 0 {
        return Err(GraphError::InvalidParameters(format!("D({n},{r}) needs n >= 3 and r != 0 mod n")));
    }
    let lab = DgpLabeling { n, r: r % n };
    let ri = (r % n) as i64;
    use DgpKind::*;
    let mut edges = Vec::with_capacity(6 * n);
    for i in 0..n as i64 {
        edges.push((lab.vertex(U, i), lab.vertex(U, i + 1)));
        edges.push((lab.vertex(Z, i), lab.vertex(Z, i + 1)));
        edges.push((lab.vertex(U, i), lab.vertex(V, i)));
        edges.push((lab.vertex(W, i), lab.vertex(Z, i)));
        edges.push((lab.vertex(V, i), lab.vertex(W, i + ri)));
        edges.push((lab.vertex(V, i), lab.vertex(W, i - ri)));
    }
    let graph = Graph::from_edges_merged(4 * n, edges)?.with_labels((0..4 * n).map(|v| lab.label(v)).collect());
    Ok((graph, lab))
}

/// The tetracirculant Σ₀(n, a, k, b): a Z_n-cover of a four-vertex voltage
/// graph with fibers U, V, W, Z (blocks in that order).
///
/// Voltage graph: a loop of voltage `a` at U, a loop of voltage `b` at Z,
/// the links U–V and W–Z with voltage 0, and two parallel V–W links with
/// voltages 0 and `k`. Derived edges: `U_i U_{i+a}`, `Z_i Z_{i+b}`,
/// `U_i V_i`, `W_i Z_i`, `V_i W_i`, `V_i W_{i+k}`.
pub fn cyclic_cover_sigma0(n: usize, a: i64, k: i64, b: i64) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameters("Σ₀ needs n >= 3".into()));
    }
    let ni = n as i64;
    let (a, k, b) = (a.rem_euclid(ni), k.rem_euclid(ni), b.rem_euclid(ni));
    if a == 0 || b == 0 || k == 0 || 2 * a == ni || 2 * b == ni {
        return Err(GraphError::InvalidParameters(format!(
            "Σ₀({n},{a},{k},{b}) has a loop or parallel edges"
        )));
    }
    let at = |block: usize, i: i64| block * n + i.rem_euclid(ni) as usize;
    let mut edges = Vec::with_capacity(6 * n);
    for i in 0..ni {
        edges.push((at(0, i), at(0, i + a)));
        edges.push((at(3, i), at(3, i + b)));
        edges.push((at(0, i), at(1, i)));
        edges.push((at(2, i), at(3, i)));
        edges.push((at(1, i), at(2, i)));
        edges.push((at(1, i), at(2, i + k)));
    }
    Graph::from_edges(4 * n, edges)
}

/// Tensor product with K₂: `(v, e)` has index `e·n + v`.
pub fn kronecker_cover(graph: &Graph) -> Graph {
    let edges: Vec<_> = graph.edges().collect();
    voltage_double_cover(graph, &edges).expect("edges of the graph are valid voltage edges")
}

/// Z₂-cover where the edges in `flipped` carry the nontrivial voltage.
/// Vertex `(v, e)` has index `e·n + v`.
pub fn voltage_double_cover(graph: &Graph, flipped: &[(usize, usize)]) -> Result<Graph, GraphError> {
    let n = graph.order();
    let mut flip = std::collections::HashSet::with_capacity(flipped.len());
    for &(u, v) in flipped {
        if u >= n || v >= n || !graph.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(u, v));
        }
        flip.insert((u.min(v), u.max(v)));
    }
    let mut edges = Vec::with_capacity(2 * graph.edge_count());
    for (u, v) in graph.edges() {
        if flip.contains(&(u, v)) {
            edges.push((u, n + v));
            edges.push((n + u, v));
        } else {
            edges.push((u, v));
            edges.push((n + u, n + v));
        }
    }
    Graph::from_edges(2 * n, edges)
}

/// A proper 2-coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub part0: Vec<usize>,
    pub part1: Vec<usize>,
    /// `color[v]` is 0 or 1.
    pub color: Vec<u8>,
}

/// 2-coloring with the smallest vertex of each component in part 0.
pub fn bipartition(graph: &Graph) -> Option<Bipartition> {
    let n = graph.order();
    let mut color = vec![u8::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            for &y in graph.neighbors(x) {
                if color[y] == u8::MAX {
                    color[y] = 1 - color[x];
                    queue.push_back(y);
                } else if color[y] == color[x] {
                    return None;
                }
            }
        }
    }
    let part0 = (0..n).filter(|&v| color[v] == 0).collect();
    let part1 = (0..n).filter(|&v| color[v] == 1).collect();
    Some(Bipartition { part0, part1, color })
}

/// Length of a shortest cycle, `None` for forests. BFS from every vertex.
pub fn girth(graph: &Graph) -> Option<usize> {
    let n = graph.order();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        'bfs: while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= best {
                break;
            }
            for &y in graph.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    best = best.min(dist[x] + dist[y] + 1);
                    if dist[y] <= dist[x] {
                        break 'bfs;
                    }
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, direct_product};

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    /// Shortest cycle through edge removal: for each edge, BFS distance
    /// between its ends in the graph without it.
    fn girth_oracle(g: &Graph) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (a, b) in g.edges() {
            let mut dist = vec![usize::MAX; g.order()];
            dist[a] = 0;
            let mut q = VecDeque::from([a]);
            while let Some(x) = q.pop_front() {
                for &y in g.neighbors(x) {
                    if (x, y) == (a, b) || dist[y] != usize::MAX {
                        continue;
                    }
                    dist[y] = dist[x] + 1;
                    q.push_back(y);
                }
            }
            if dist[b] != usize::MAX {
                let len = dist[b] + 1;
                best = Some(best.map_or(len, |c: usize| c.min(len)));
            }
        }
        best
    }

    #[test]
    fn strict_constructor_rejects_loops_and_parallels() {
        assert_eq!(Graph::from_edges(2, [(0, 0)]), Err(GraphError::Loop(0)));
        assert_eq!(Graph::from_edges(2, [(0, 1), (1, 0)]), Err(GraphError::ParallelEdge(0, 1)));
        assert!(matches!(Graph::from_edges(2, [(0, 2)]), Err(GraphError::VertexOutOfRange { .. })));
        assert_eq!(Graph::from_edges_merged(2, [(0, 1), (1, 0)]).unwrap().edge_count(), 1);
    }

    #[test]
    fn cayley_examples() {
        let z7 = cyclic(7).unwrap();
        let s = ElementSubset::new(&z7, [1, 6]).unwrap();
        assert_eq!(cayley_graph(&z7, &s).unwrap().edges().collect::<Vec<_>>(), cycle(7).edges().collect::<Vec<_>>());
        let klein = direct_product(&cyclic(2).unwrap(), &cyclic(2).unwrap());
        let k4 = cayley_graph(&klein, &ElementSubset::new(&klein, [1, 2, 3]).unwrap()).unwrap();
        assert_eq!(k4.edge_count(), 6);
        let z6 = cyclic(6).unwrap();
        let g = cayley_graph(&z6, &ElementSubset::new(&z6, [2, 3, 4]).unwrap()).unwrap();
        assert_eq!(g.regular_valency(), Some(3));
        assert!(g.has_edge(0, 2) && g.has_edge(2, 4) && g.has_edge(0, 4));
        assert!(bipartition(&g).is_none());
        assert_eq!(
            cayley_graph(&z6, &ElementSubset::new(&z6, [0, 1, 5]).unwrap()),
            Err(GraphError::IdentityInConnectionSet)
        );
        assert_eq!(cayley_graph(&z6, &ElementSubset::new(&z6, [1]).unwrap()), Err(GraphError::NotInverseClosed));
    }

    #[test]
    fn cayley_right_multiplication_is_regular_automorphism_group() {
        let g = crate::groups::semidirect_cyclic(5, 4, 2).unwrap();
        let s = ElementSubset::new(&g, [1, 4, 5, 15]).unwrap();
        assert!(s.is_inverse_closed(&g));
        let cay = cayley_graph(&g, &s).unwrap();
        for h in g.elements() {
            let right = Permutation::from_images((0..g.order()).map(|x| g.mul(x, h)).collect()).unwrap();
            assert!(cay.is_automorphism(&right));
            if h != 0 {
                assert!((0..g.order()).all(|x| right.apply(x) != x));
            }
        }
    }

    #[test]
    fn haar_examples() {
        let z1 = cyclic(1).unwrap();
        let k2 = haar_graph(&z1, &ElementSubset::new(&z1, [0]).unwrap()).unwrap();
        assert_eq!(k2.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        let z3 = cyclic(3).unwrap();
        let k33 = haar_graph(&z3, &ElementSubset::new(&z3, [0, 1, 2]).unwrap()).unwrap();
        assert_eq!(k33.edge_count(), 9);
        assert_eq!(girth(&k33), Some(4));
        assert_eq!(haar_graph(&z3, &ElementSubset::empty(&z3)), Err(GraphError::EmptyConnectionSet));
    }

    #[test]
    fn haar_structure_invariants() {
        let g = crate::groups::semidirect_cyclic(5, 4, 2).unwrap();
        for members in [vec![0, 1, 7], vec![2, 3, 11, 19], vec![0]] {
            let s = ElementSubset::new(&g, members).unwrap();
            let h = haar_graph(&g, &s).unwrap();
            assert_eq!(h.order(), 40);
            assert_eq!(h.edge_count(), 20 * s.len());
            assert_eq!(h.regular_valency(), Some(s.len()));
            for (u, v) in h.edges() {
                assert!(u < 20 && v >= 20);
            }
        }
    }

    #[test]
    fn bicayley_examples() {
        let z5 = cyclic(5).unwrap();
        let s = ElementSubset::new(&z5, [0, 1, 3]).unwrap();
        let empty = ElementSubset::empty(&z5);
        let bc = bicayley_graph(&z5, &empty, &empty, &s).unwrap();
        assert_eq!(bc.edges().collect::<Vec<_>>(), haar_graph(&z5, &s).unwrap().edges().collect::<Vec<_>>());
        let z3 = cyclic(3).unwrap();
        let l = ElementSubset::new(&z3, [1, 2]).unwrap();
        let prism = bicayley_graph(&z3, &l, &l, &ElementSubset::new(&z3, [0]).unwrap()).unwrap();
        assert_eq!((prism.order(), prism.edge_count()), (6, 9));
        let expected = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (0, 3), (1, 4), (2, 5)];
        for (a, b) in expected {
            assert!(prism.has_edge(a, b));
        }
        let bad = ElementSubset::new(&z3, [1]).unwrap();
        assert_eq!(bicayley_graph(&z3, &bad, &l, &l), Err(GraphError::NotInverseClosed));
    }

    #[test]
    fn generalized_petersen_examples() {
        let p = generalized_petersen(5, 2).unwrap();
        assert_eq!((p.order(), p.edge_count()), (10, 15));
        assert_eq!(girth(&p), Some(5));
        assert_eq!(girth_oracle(&p), Some(5));
        let cube = generalized_petersen(4, 1).unwrap();
        assert!(bipartition(&cube).is_some());
        assert_eq!(girth(&cube), Some(4));
        assert_eq!(girth_oracle(&cube), Some(4));
        assert_eq!(generalized_petersen(10, 2).unwrap().order(), 20);
        assert!(generalized_petersen(8, 4).is_err());
        assert!(generalized_petersen(2, 1).is_err());
    }

    #[test]
    fn dgp_structure() {
        for n in 3..=20 {
            for r in 1..n {
                let (g, lab) = double_generalized_petersen(n, r).unwrap();
                assert_eq!(g.order(), 4 * n);
                assert!(g.is_connected(), "D({n},{r})");
                assert_eq!(bipartition(&g).is_some(), n % 2 == 0, "D({n},{r})");
                if 2 * r != n {
                    assert_eq!(g.regular_valency(), Some(3));
                    assert_eq!(g.edge_count(), 6 * n);
                }
                for (a, b) in g.edges() {
                    assert!(lab.edge_class(a, b).is_some());
                }
            }
        }
        assert!(double_generalized_petersen(5, 5).is_err());
        assert!(double_generalized_petersen(2, 1).is_err());
    }

    #[test]
    fn dgp_edge_classes_partition_edges() {
        let (g, lab) = double_generalized_petersen(10, 2).unwrap();
        assert_eq!((g.order(), g.edge_count()), (40, 60));
        let count = |c| g.edges().filter(|&(a, b)| lab.edge_class(a, b) == Some(c)).count();
        assert_eq!(count(DgpEdgeClass::Outer), 20);
        assert_eq!(count(DgpEdgeClass::Spoke), 20);
        assert_eq!(count(DgpEdgeClass::Inner), 20);
        assert_eq!(lab.label(lab.vertex(DgpKind::W, -1)), "w9");
    }

    #[test]
    fn dgp_bipartition_matches_parity_rule() {
        // part containing u_i for even i holds w_{i±r}, and v_j, z_{j±r} for odd j
        let (n, r) = (10, 3);
        let (g, lab) = double_generalized_petersen(n, r).unwrap();
        let bp = bipartition(&g).unwrap();
        let c = |k, i| bp.color[lab.vertex(k, i)];
        for i in (0..n as i64).step_by(2) {
            let base = c(DgpKind::U, i);
            assert_eq!(c(DgpKind::W, i + r as i64), base);
            assert_eq!(c(DgpKind::W, i - r as i64), base);
            assert_eq!(c(DgpKind::V, i + 1), base);
            assert_eq!(c(DgpKind::Z, i + 1 + r as i64), base);
        }
        assert_eq!((bp.part0.len(), bp.part1.len()), (20, 20));
    }

    #[test]
    fn sigma0_counts_and_errors() {
        let g = cyclic_cover_sigma0(5, 1, 4, 1).unwrap();
        assert_eq!((g.order(), g.edge_count(), g.regular_valency()), (20, 30, Some(3)));
        for (n, a, k, b) in [(7, 1, 3, 2), (9, 2, 5, 4), (12, 5, 1, 1)] {
            let g = cyclic_cover_sigma0(n, a, k, b).unwrap();
            assert_eq!((g.order(), g.edge_count()), (4 * n, 6 * n));
        }
        assert!(cyclic_cover_sigma0(6, 3, 1, 1).is_err());
        assert!(cyclic_cover_sigma0(6, 1, 6, 1).is_err());
        assert!(cyclic_cover_sigma0(6, 1, 2, 0).is_err());
    }

    #[test]
    fn covers() {
        let k2 = complete(2);
        let kc = kronecker_cover(&k2);
        assert_eq!(kc.edges().collect::<Vec<_>>(), vec![(0, 3), (1, 2)]);
        let c6 = kronecker_cover(&cycle(3));
        assert_eq!(c6.regular_valency(), Some(2));
        assert!(c6.is_connected());
        assert_eq!(girth(&c6), Some(6));
        let p = generalized_petersen(5, 2).unwrap();
        let trivial = voltage_double_cover(&p, &[]).unwrap();
        assert_eq!(trivial.components().0, 2);
        let all: Vec<_> = p.edges().collect();
        assert_eq!(voltage_double_cover(&p, &all).unwrap(), kronecker_cover(&p));
        assert_eq!(voltage_double_cover(&p, &[(0, 2)]), Err(GraphError::NotAnEdge(0, 2)));
    }

    #[test]
    fn voltage_cover_has_deck_involution() {
        let p = generalized_petersen(7, 2).unwrap();
        let inner: Vec<_> = p.edges().filter(|&(a, b)| a >= 7 && b >= 7).collect();
        let cover = voltage_double_cover(&p, &inner).unwrap();
        let deck = Permutation::from_images((0..28).map(|v| (v + 14) % 28).collect()).unwrap();
        assert!(cover.is_automorphism(&deck));
    }

    #[test]
    fn bipartition_examples() {
        let bp = bipartition(&cycle(4)).unwrap();
        assert_eq!((bp.part0, bp.part1), (vec![0, 2], vec![1, 3]));
        assert!(bipartition(&double_generalized_petersen(5, 2).unwrap().0).is_none());
        let bp = bipartition(&double_generalized_petersen(10, 2).unwrap().0).unwrap();
        assert_eq!((bp.part0.len(), bp.part1.len()), (20, 20));
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&double_generalized_petersen(10, 2).unwrap().0), Some(8));
        assert_eq!(girth(&Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()), None);
        assert_eq!(girth(&complete(4)), Some(3));
        for n in 3..=12 {
            for r in 1..n {
                let g = double_generalized_petersen(n, r).unwrap().0;
                assert_eq!(girth(&g), girth_oracle(&g), "D({n},{r})");
            }
        }
    }

    #[test]
    fn adjacency_text_round_trip() {
        let g = generalized_petersen(5, 2).unwrap();
        let text = g.to_adjacency_text();
        assert!(text.starts_with("0: 1 4 5\n"));
        let parsed = Graph::parse_adjacency_text(&text).unwrap();
        assert_eq!(parsed.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        assert!(Graph::parse_adjacency_text("0: 1\n1:\n").is_err());
    }
}
