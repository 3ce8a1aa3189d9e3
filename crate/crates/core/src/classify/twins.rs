//! Cayley recognition for graphs with twins.
//!
//! Vertices with equal neighborhoods ("twins") make Γ a lexicographic
//! product Γ'[K̄_t] over the twin-free quotient Γ', and Aut(Γ) contains
//! the wreath product S_t ≀ Aut(Γ'). When the orders show equality, a
//! regular subgroup of Aut(Γ) exists exactly when Aut(Γ') has a
//! transitive subgroup T whose point stabilizers have order `s` dividing
//! `t`: a regular R projects to such a T, and conversely `T × Z_{t/s}`
//! acting on itself by right multiplication can be laid over the twin
//! classes. This avoids searching a group whose order grows like `(t!)^c`.

use std::collections::HashMap;

use num_bigint::BigUint;

use super::regular::{find_regular_subgroup, find_transitive_subgroup};
use crate::graph::Graph;
use crate::perm::{closure, PermGroup, Permutation};
use crate::search::automorphism_group;

/// Classes of vertices with identical neighbor lists, ordered by least
/// member; isolated vertices form one class.
pub fn twin_classes(graph: &Graph) -> Vec<Vec<usize>> {
    let mut index: HashMap<&[usize], usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..graph.order() {
        let id = *index.entry(graph.neighbors(v)).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[id].push(v);
    }
    classes
}

/// `None` when the reduction does not apply; otherwise the answer.
/// `aut` must be transitive.
pub(super) fn cayley_via_twin_quotient(graph: &Graph, aut: &PermGroup) -> Option<Option<Vec<Permutation>>> {
    let classes = twin_classes(graph);
    let t = classes[0].len();
    if t == 1 || classes.iter().any(|c| c.len() != t) {
        return None;
    }
    let c = classes.len();
    let mut class_of = vec![0; graph.order()];
    for (i, cl) in classes.iter().enumerate() {
        for &v in cl {
            class_of[v] = i;
        }
    }
    let mut edges: Vec<(usize, usize)> = graph
        .edges()
        .map(|(u, v)| (class_of[u].min(class_of[v]), class_of[u].max(class_of[v])))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let quotient = Graph::from_edges(c, edges).ok()?;
    let qaut = automorphism_group(&quotient);
    let factorial: BigUint = (1..=t).map(BigUint::from).product();
    if aut.order() != factorial.pow(c as u32) * qaut.order() {
        return None;
    }
    let all: Vec<usize> = (0..c).collect();
    let transitive = match find_regular_subgroup(&qaut, &all) {
        Some(gens) => Some(gens),
        None => find_transitive_subgroup(&qaut, t),
    };
    let Some(tgens) = transitive else { return Some(None) };
    let witness = lift(graph, &classes, &tgens, t);
    // The construction is a theorem, but an unchecked witness is not a witness.
    let n = graph.order();
    let group = PermGroup::new(n, witness.clone()).ok()?;
    let ok = witness.iter().all(|g| graph.is_automorphism(g))
        && closure(n, &witness, n + 1).is_some_and(|e| e.len() == n)
        && group.is_transitive_on(&(0..n).collect::<Vec<_>>());
    if ok {
        Some(Some(witness))
    } else {
        None
    }
}

/// Lays `T × Z_{t/s}` over the twin classes and returns the right
/// multiplications by the generators as permutations of the vertices.
fn lift(graph: &Graph, classes: &[Vec<usize>], tgens: &[Permutation], t: usize) -> Vec<Permutation> {
    let c = classes.len();
    let elements = closure(c, tgens, c * t).expect("|T| divides c·t");
    let s = elements.len() / c;
    let z = t / s;
    let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    // vertex of (element x, i): the next unused slot in class 0^x
    let mut vertex_of = vec![usize::MAX; elements.len() * z];
    let mut fill = vec![0usize; c];
    for (xi, x) in elements.iter().enumerate() {
        let cl = x.apply(0);
        for i in 0..z {
            vertex_of[xi * z + i] = classes[cl][fill[cl]];
            fill[cl] += 1;
        }
    }
    let mut point_of = vec![0usize; graph.order()];
    for (p, &v) in vertex_of.iter().enumerate() {
        point_of[v] = p;
    }
    let as_perm = |f: &dyn Fn(usize, usize) -> (usize, usize)| {
        Permutation::from_fn(graph.order(), |v| {
            let p = point_of[v];
            let (xi, i) = f(p / z, p % z);
            vertex_of[xi * z + i]
        })
    };
    let mut gens: Vec<Permutation> =
        tgens.iter().map(|g| as_perm(&|xi, i| (index[&elements[xi].then(g)], i))).collect();
    if z > 1 {
        gens.push(as_perm(&|xi, i| (xi, (i + 1) % z)));
    }
    gens
}
