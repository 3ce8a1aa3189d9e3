//! Named automorphisms of D(n, r) and the classification predictions.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::{cayley_witness_in, haar_witness_in, ClassifyError};
use crate::graph::{bipartition, double_generalized_petersen, DgpKind, DgpLabeling, Graph};
use crate::groups::semidirect_cyclic;
use crate::perm::{PermGroup, Permutation};
use crate::search::automorphism_group;

use DgpKind::{U, V, W, Z};

fn dgp(n: usize, r: usize) -> Result<(Graph, DgpLabeling), ClassifyError> {
    double_generalized_petersen(n, r).map_err(|_| ClassifyError::InvalidParameters { n, r })
}

fn dgp_map(lab: &DgpLabeling, f: impl Fn(DgpKind, i64) -> (DgpKind, i64)) -> Permutation {
    Permutation::from_fn(4 * lab.n, |x| {
        let (kind, i) = lab.decode(x);
        let (k2, j) = f(kind, i as i64);
        lab.vertex(k2, j)
    })
}

/// Rotation α, flip β (u ↔ z, v ↔ w) and reflection γ (i ↦ −i), each
/// checked against the edge set.
pub fn standard_automorphisms(n: usize, r: usize) -> Result<(Permutation, Permutation, Permutation), ClassifyError> {
    let (graph, lab) = dgp(n, r)?;
    let alpha = dgp_map(&lab, |k, i| (k, i + 1));
    let beta = dgp_map(&lab, |k, i| {
        let k2 = match k {
            U => Z,
            V => W,
            W => V,
            Z => U,
        };
        (k2, i)
    });
    let gamma = dgp_map(&lab, |k, i| (k, -i));
    for (name, p) in [("alpha", &alpha), ("beta", &beta), ("gamma", &gamma)] {
        if !graph.is_automorphism(p) {
            return Err(ClassifyError::NotAnAutomorphism(name));
        }
    }
    Ok((alpha, beta, gamma))
}

/// δ for D(n, r), emitted on the normalized parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaWitness {
    pub n: usize,
    /// The parameter as given (reduced mod n).
    pub r_input: usize,
    /// Odd representative `0 < r < m` the formulas are stated for.
    pub r: usize,
    pub m: usize,
    /// Automorphism of D(n, r) for the normalized `r`.
    pub delta: Permutation,
    /// Isomorphism D(n, r_input) → D(n, r); the identity when the two
    /// graphs coincide.
    pub isomorphism: Permutation,
}

/// Picks the odd residue below `m` among `±r mod m`.
fn normalize(n: usize, r: usize) -> Result<(usize, usize), ClassifyError> {
    if n % 2 == 1 {
        return Err(ClassifyError::OddN { n });
    }
    let m = n / 2;
    let r0 = r % n;
    let rm = r0 % m;
    let neg_one = (m - 1) % m;
    if (rm * rm) % m != neg_one {
        return Err(ClassifyError::NotNegativeResidue { r, m });
    }
    let cand = [rm, m - rm].into_iter().find(|&c| c > 0 && c < m && c % 2 == 1);
    match cand {
        Some(c) => Ok((m, c)),
        // m = 2 with r even cannot occur (r^2 = 0); keep the error honest
        None => Err(ClassifyError::NormalizationFailed { r, m }),
    }
}

pub fn delta_automorphism(n: usize, r: usize) -> Result<DeltaWitness, ClassifyError> {
    let (m, rn) = normalize(n, r)?;
    let (source, src_lab) = dgp(n, r)?;
    let (graph, lab) = dgp(n, rn)?;
    let r0 = (r % n) as i64;
    let (ni, ri, mi) = (n as i64, rn as i64, m as i64);

    // D(n, s) = D(n, -s), and shifting w and z by m maps D(n, s) onto D(n, s + m).
    let isomorphism = if (ri - r0).rem_euclid(ni) == 0 || (ri + r0).rem_euclid(ni) == 0 {
        Permutation::identity(4 * n)
    } else {
        dgp_map(&src_lab, |k, i| match k {
            W | Z => (k, i + mi),
            _ => (k, i),
        })
    };
    let image = source.relabel(&isomorphism).expect("same degree");
    if !image.edges().eq(graph.edges()) {
        return Err(ClassifyError::NormalizationFailed { r, m });
    }

    let shift = if m % 2 == 0 { mi } else { 0 };
    let delta = dgp_map(&lab, |k, i| {
        let t = ri * i + 1;
        match (i % 2 == 0, k) {
            (true, U) => (V, t),
            (true, V) => (U, t),
            (true, W) => (Z, t + shift),
            (true, Z) => (W, t + shift),
            (false, U) => (W, t),
            (false, V) => (Z, t),
            (false, W) => (U, t + shift),
            (false, Z) => (V, t + shift),
        }
    });
    if !graph.is_automorphism(&delta) {
        return Err(ClassifyError::NotAnAutomorphism("delta"));
    }
    let bp = bipartition(&graph).expect("D(n, r) is bipartite for even n");
    if bp.part0.iter().any(|&x| bp.color[delta.apply(x)] != 0) {
        return Err(ClassifyError::SwapsParts);
    }
    Ok(DeltaWitness { n, r_input: r % n, r: rn, m, delta, isomorphism })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HaarWitnessReport {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    /// `e` with `δ⁻¹ α² δ = α^e`, if `e ≡ ±2r (mod n)`.
    pub conjugation_exponent: Option<i64>,
    pub group_order: u64,
    pub regular_on_part0: bool,
    pub regular_on_part1: bool,
    /// Element-order multiset equals that of Z_m ⋊_r Z_4.
    pub order_profile_matches: bool,
    pub delta: DeltaWitness,
}

impl HaarWitnessReport {
    pub fn passed(&self) -> bool {
        self.conjugation_exponent.is_some()
            && self.group_order == 2 * self.n as u64
            && self.regular_on_part0
            && self.regular_on_part1
            && self.order_profile_matches
    }
}

pub fn verify_haar_witness(n: usize, r: usize) -> Result<HaarWitnessReport, ClassifyError> {
    let delta = delta_automorphism(n, r)?;
    let (alpha, _, _) = standard_automorphisms(n, delta.r)?;
    let (graph, _) = dgp(n, delta.r)?;
    let a2 = alpha.pow(2);
    let conj = a2.conjugate_by(&delta.delta);
    let e = 2 * delta.r as i64;
    let conjugation_exponent = [e, -e].into_iter().find(|&k| alpha.pow(k) == conj);

    let group = PermGroup::new(4 * n, vec![a2, delta.delta.clone()]).expect("same degree");
    let group_order = group.order_u64().unwrap_or(u64::MAX);
    let bp = bipartition(&graph).expect("bipartite");
    let regular_on_part0 = group.is_regular_on(&bp.part0).unwrap_or(false);
    let regular_on_part1 = group.is_regular_on(&bp.part1).unwrap_or(false);

    let mut profile = BTreeMap::new();
    if let Some(elems) = group.enumerate_elements(4 * n) {
        for g in elems {
            *profile.entry(g.order() as usize).or_insert(0usize) += 1;
        }
    }
    let target = semidirect_cyclic(delta.m, 4, delta.r as i64).expect("r^4 = 1 mod m").order_profile();
    Ok(HaarWitnessReport {
        n,
        r: delta.r,
        m: delta.m,
        conjugation_exponent,
        group_order,
        regular_on_part0,
        regular_on_part1,
        order_profile_matches: profile == target,
        delta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DnrBranch {
    OddOrNonresidue,
    SquareResidue,
    NegativeResidue,
    DodecahedralException,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DnrPrediction {
    pub n: usize,
    pub r: usize,
    pub m: Option<usize>,
    pub vertex_transitive: bool,
    pub cayley: bool,
    pub haar: bool,
    pub branch: DnrBranch,
}

/// Expected symmetry of D(n, r). When `m = 2` both residue conditions hold
/// and the square branch is taken.
pub fn predict_dnr(n: usize, r: usize) -> DnrPrediction {
    let rr = r % n;
    let m = (n % 2 == 0).then_some(n / 2);
    let (branch, vt, cayley, haar) = match m {
        _ if n == 5 && (rr == 2 || rr == 3) => (DnrBranch::DodecahedralException, true, false, false),
        Some(m) if (rr * rr) % m == 1 % m => (DnrBranch::SquareResidue, true, true, true),
        Some(m) if (rr * rr) % m == m - 1 => (DnrBranch::NegativeResidue, true, false, true),
        _ => (DnrBranch::OddOrNonresidue, false, false, false),
    };
    DnrPrediction { n, r, m, vertex_transitive: vt, cayley, haar, branch }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremRow {
    pub prediction: DnrPrediction,
    pub vertex_transitive: bool,
    pub cayley: bool,
    pub haar: bool,
    pub aut_order: String,
}

impl TheoremRow {
    pub fn agrees(&self) -> bool {
        let p = &self.prediction;
        (p.vertex_transitive, p.cayley, p.haar) == (self.vertex_transitive, self.cayley, self.haar)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremSweep {
    pub max_n: usize,
    /// Sorted by `(n, r)`.
    pub rows: Vec<TheoremRow>,
}

impl TheoremSweep {
    pub fn mismatches(&self) -> Vec<&TheoremRow> {
        self.rows.iter().filter(|row| !row.agrees()).collect()
    }
}

/// Computes (VT, Cayley, Haar) for every D(n, r) with `3 <= n <= max_n`,
/// `0 < r < n`, in parallel, and pairs it with [`predict_dnr`].
pub fn verify_theorems(max_n: usize) -> TheoremSweep {
    let params: Vec<(usize, usize)> = (3..=max_n).flat_map(|n| (1..n).map(move |r| (n, r))).collect();
    let mut rows: Vec<TheoremRow> = params.into_par_iter().map(|(n, r)| theorem_row(n, r)).collect();
    rows.sort_by_key(|row| (row.prediction.n, row.prediction.r));
    TheoremSweep { max_n, rows }
}

fn theorem_row(n: usize, r: usize) -> TheoremRow {
    let (graph, _) = double_generalized_petersen(n, r).expect("0 < r < n");
    let aut = automorphism_group(&graph);
    let vt = aut.orbits().len() == 1;
    let cayley = vt && cayley_witness_in(&graph, &aut).is_some();
    let haar = haar_witness_in(&graph, &aut).is_some();
    let order: BigUint = aut.order();
    TheoremRow { prediction: predict_dnr(n, r), vertex_transitive: vt, cayley, haar, aut_order: order.to_string() }
}
