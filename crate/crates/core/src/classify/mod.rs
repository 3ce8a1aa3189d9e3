//! Vertex-, arc-, Cayley- and Haar-recognition on top of the automorphism
//! search, plus the D(n, r) automorphisms and theorem cross-checks.

mod components;
mod dnr;
mod regular;
mod twins;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{bipartition, girth, Bipartition, Graph};
use crate::perm::{PermGroup, Permutation};
use crate::search::automorphism_group;

pub use dnr::{
    delta_automorphism, predict_dnr, standard_automorphisms, verify_haar_witness, verify_theorems, DeltaWitness,
    DnrBranch, DnrPrediction, HaarWitnessReport, TheoremRow, TheoremSweep,
};
pub use regular::{
    extend_by_normalizer, find_regular_subgroup, find_regular_subgroup_within, find_semiregular_with_orbit,
    find_transitive_subgroup, sample_regular_subgroup, SearchOutcome,
};

/// Random elements drawn before the exhaustive regular-subgroup search.
const RANDOM_SAMPLES: usize = 512;
/// Search nodes allowed when growing each random semiregular seed.
const SEED_BUDGET: u64 = 20_000;
pub use twins::twin_classes;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("arc-transitivity is undefined for a graph without edges")]
    NoEdges,
    #[error("D({n},{r}) is not a valid double generalized Petersen graph")]
    InvalidParameters { n: usize, r: usize },
    #[error("n = {n} is odd, so m = n/2 is undefined")]
    OddN { n: usize },
    #[error("r = {r} does not satisfy r^2 = -1 mod {m}")]
    NotNegativeResidue { r: usize, m: usize },
    #[error("could not normalize r = {r} to an odd residue below {m}")]
    NormalizationFailed { r: usize, m: usize },
    #[error("{0} does not preserve the edge set")]
    NotAnAutomorphism(&'static str),
    #[error("delta does not preserve the bipartition")]
    SwapsParts,
}

/// Order of the automorphism group: a JSON number when it fits in `u64`,
/// a decimal string otherwise.
fn serialize_order<S: Serializer>(order: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(order) {
        Ok(v) => s.serialize_u64(v),
        Err(_) => s.serialize_str(&order.to_string()),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    /// Generators of a regular subgroup of Aut.
    pub cayley: Option<Vec<Permutation>>,
    /// Generators of a subgroup regular on each part.
    pub haar: Option<Vec<Permutation>>,
    pub automorphism_generators: Vec<Permutation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub order: usize,
    pub edges: usize,
    pub valency: Option<usize>,
    pub bipartite: bool,
    /// `None` (JSON null) for forests.
    pub girth: Option<usize>,
    #[serde(serialize_with = "serialize_order")]
    pub aut_order: BigUint,
    pub vertex_transitive: bool,
    pub arc_transitive: bool,
    pub cayley: bool,
    pub haar: bool,
    pub orbit_count: usize,
    pub witnesses: Witnesses,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn classify(graph: &Graph) -> ClassificationReport {
    let aut = automorphism_group(graph);
    classify_with_group(graph, &aut)
}

/// As [`classify`], reusing an already computed automorphism group.
pub fn classify_with_group(graph: &Graph, aut: &PermGroup) -> ClassificationReport {
    let orbit_count = aut.orbits().len();
    let vertex_transitive = orbit_count == 1;
    let arc_transitive = graph.edge_count() > 0 && arc_transitive_in(graph, aut);
    let haar = haar_witness_in(graph, aut);
    let cayley = if vertex_transitive { cayley_witness_with_hint(graph, aut, haar.as_deref()) } else { None };
    ClassificationReport {
        order: graph.order(),
        edges: graph.edge_count(),
        valency: graph.regular_valency(),
        bipartite: bipartition(graph).is_some(),
        girth: girth(graph),
        aut_order: aut.order(),
        vertex_transitive,
        arc_transitive,
        cayley: cayley.is_some(),
        haar: haar.is_some(),
        orbit_count,
        witnesses: Witnesses { cayley, haar, automorphism_generators: aut.generators().to_vec() },
    }
}

pub fn is_vertex_transitive(graph: &Graph) -> bool {
    graph.order() > 0 && automorphism_group(graph).orbits().len() == 1
}

pub fn is_arc_transitive(graph: &Graph) -> Result<bool, ClassifyError> {
    if graph.edge_count() == 0 {
        return Err(ClassifyError::NoEdges);
    }
    Ok(arc_transitive_in(graph, &automorphism_group(graph)))
}

/// One orbit on arcs. Isolated vertices are excluded so that the result
/// implies vertex-transitivity.
fn arc_transitive_in(graph: &Graph, aut: &PermGroup) -> bool {
    let n = graph.order();
    if (0..n).any(|v| graph.degree(v) == 0) {
        return false;
    }
    let offset: Vec<usize> = std::iter::once(0)
        .chain((0..n).scan(0, |acc, v| {
            *acc += graph.degree(v);
            Some(*acc)
        }))
        .collect();
    let arc_id = |u: usize, v: usize| offset[u] + graph.neighbors(u).binary_search(&v).expect("arc");
    let total = offset[n];
    let mut seen = vec![false; total];
    let start = (0, graph.neighbors(0)[0]);
    seen[arc_id(start.0, start.1)] = true;
    let mut queue = vec![start];
    let mut count = 1;
    while let Some((u, v)) = queue.pop() {
        for g in aut.generators() {
            let (a, b) = (g.apply(u), g.apply(v));
            let id = arc_id(a, b);
            if !seen[id] {
                seen[id] = true;
                count += 1;
                queue.push((a, b));
            }
        }
    }
    count == total
}

/// Whether Γ is a Cayley graph, with generators of a regular subgroup.
pub fn is_cayley(graph: &Graph) -> (bool, Option<Vec<Permutation>>) {
    let w = cayley_witness_in(graph, &automorphism_group(graph));
    (w.is_some(), w)
}

pub fn cayley_witness_in(graph: &Graph, aut: &PermGroup) -> Option<Vec<Permutation>> {
    cayley_witness_with_hint(graph, aut, None)
}

/// [`cayley_witness_in`] that first tries to extend `hint`, a subgroup of
/// `aut` acting semiregularly with two orbits (such as a Haar witness), to a
/// regular group. The answer does not depend on the hint, only the speed.
pub fn cayley_witness_with_hint(
    graph: &Graph,
    aut: &PermGroup,
    hint: Option<&[Permutation]>,
) -> Option<Vec<Permutation>> {
    if graph.order() == 0 || aut.orbit_of(0).len() != graph.order() {
        return None;
    }
    if !graph.is_connected() {
        let copies = components::isomorphic_copies(graph)?;
        let inner = cayley_witness_in(&copies.first, &automorphism_group(&copies.first))?;
        return Some(copies.spread(&inner));
    }
    if let Some(answer) = twins::cayley_via_twin_quotient(graph, aut) {
        return answer;
    }
    if let Some(found) = hint.and_then(|h| extend_by_normalizer(aut, h)) {
        return Some(found);
    }
    if let Some(found) = sample_regular_subgroup(aut, RANDOM_SAMPLES, SEED_BUDGET) {
        return Some(found);
    }
    let all: Vec<usize> = (0..graph.order()).collect();
    find_regular_subgroup(aut, &all)
}

/// Whether Γ is a Haar graph, with generators of a subgroup that is
/// regular on each part.
pub fn is_haar(graph: &Graph) -> (bool, Option<Vec<Permutation>>) {
    let w = haar_witness_in(graph, &automorphism_group(graph));
    (w.is_some(), w)
}

pub fn haar_witness_in(graph: &Graph, aut: &PermGroup) -> Option<Vec<Permutation>> {
    let bp = bipartition(graph)?;
    if graph.edge_count() == 0 || bp.part0.len() != bp.part1.len() || graph.regular_valency().is_none() {
        return None;
    }
    if graph.is_connected() {
        let plus = part_preserving_subgroup(aut, &bp);
        return find_semiregular_with_orbit(&plus, &bp.part0);
    }
    let copies = components::isomorphic_copies(graph)?;
    let inner = haar_witness_in(&copies.first, &automorphism_group(&copies.first))?;
    Some(copies.spread(&inner))
}

/// The subgroup of index at most 2 fixing each color class of a connected
/// bipartite graph, by Schreier generators over the transversal `{1, t}`.
pub fn part_preserving_subgroup(aut: &PermGroup, bp: &Bipartition) -> PermGroup {
    let swaps = |g: &Permutation| bp.color[g.apply(bp.part0[0])] != 0;
    let Some(t) = aut.generators().iter().find(|g| swaps(g)).cloned() else {
        return aut.clone();
    };
    let t_inv = t.inverse();
    let mut gens = Vec::new();
    for g in aut.generators() {
        if swaps(g) {
            gens.push(g.then(&t_inv));
            gens.push(t.then(g));
        } else {
            gens.push(g.clone());
            gens.push(t.then(g).then(&t_inv));
        }
    }
    gens.retain(|g| !g.is_identity());
    gens.sort();
    gens.dedup();
    PermGroup::new(aut.degree(), gens).expect("generators share the degree")
}
