//! Disconnected graphs as disjoint copies of one component.
//!
//! If Γ = c·Γ₀ and Γ₀ admits a group `W` that is regular (or semiregular
//! with two orbits), then `W × Z_c` does the same on Γ: `W` acts inside
//! every copy through fixed isomorphisms and `Z_c` cycles the copies.
//! Conversely the stabilizer of a component inherits the property, so the
//! first component decides.

use crate::graph::Graph;
use crate::perm::Permutation;
use crate::search::find_isomorphism;

/// Γ split into isomorphic copies of its first component.
pub(super) struct Copies {
    pub first: Graph,
    /// `place[i][j]`: the vertex of Γ that plays vertex `j` of `first` in
    /// copy `i`.
    place: Vec<Vec<usize>>,
    order: usize,
}

/// `None` when the components are not pairwise isomorphic.
pub(super) fn isomorphic_copies(graph: &Graph) -> Option<Copies> {
    let (count, component) = graph.components();
    let mut members = vec![Vec::new(); count];
    for v in 0..graph.order() {
        members[component[v]].push(v);
    }
    let induced = |vs: &[usize]| {
        let local = |v: usize| vs.binary_search(&v).expect("neighbors share a component");
        let edges = vs.iter().flat_map(|&u| graph.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
        Graph::from_edges(vs.len(), edges.map(|(u, v)| (local(u), local(v)))).expect("induced subgraph is simple")
    };
    let first = induced(&members[0]);
    let mut place = Vec::with_capacity(count);
    for vs in &members {
        let iso = find_isomorphism(&first, &induced(vs))?;
        place.push((0..first.order()).map(|j| vs[iso.apply(j)]).collect());
    }
    Some(Copies { first, place, order: graph.order() })
}

impl Copies {
    /// Lifts generators acting on the first component to `W × Z_c`.
    pub fn spread(&self, gens: &[Permutation]) -> Vec<Permutation> {
        let k = self.first.order();
        let c = self.place.len();
        let mut slot = vec![(0, 0); self.order];
        for (i, row) in self.place.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                slot[v] = (i, j);
            }
        }
        let lift = |f: &dyn Fn(usize, usize) -> (usize, usize)| {
            Permutation::from_fn(self.order, |v| {
                let (i, j) = slot[v];
                let (i2, j2) = f(i, j);
                self.place[i2][j2]
            })
        };
        let mut out: Vec<Permutation> = gens
            .iter()
            .filter(|g| g.degree() == k)
            .map(|g| lift(&|i, j| (i, g.apply(j))))
            .collect();
        if c > 1 {
            out.push(lift(&|i, j| ((i + 1) % c, j)));
        }
        out
    }
}
