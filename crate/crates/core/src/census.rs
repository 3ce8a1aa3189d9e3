//! Census of connected Haar graphs over a catalog of groups.
//!
//! Work is split into strata `(group, |S|)`. Within a stratum only one
//! subset per class of `S ~ aSb ~ aS⁻¹b` is built (all of these give
//! isomorphic Haar graphs), and only subsets containing the identity are
//! considered since every class has such a member. Surviving graphs are
//! deduplicated by canonical certificate, keeping the least
//! `(group, S)` as provenance, and then classified.

use std::collections::{BTreeMap, HashSet};
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{load_catalog, CatalogError};
use crate::classify::cayley_witness_with_hint;
use crate::graph::{haar_graph, Graph};
use crate::perm::Permutation;
use crate::groups::{ElementSubset, FiniteGroup};
use crate::search::{canonical_form, search};

/// Largest group handled; subsets are bitmasks.
pub const MAX_GROUP_ORDER: usize = 63;

/// Up to this order the orbit reduction uses a visited bitmap over all
/// subsets; above it each subset is tested for minimality instead.
const BITMAP_MAX_ORDER: usize = 24;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("group {name} has order {order}, above the census limit of {MAX_GROUP_ORDER}")]
    GroupTooLarge { name: String, order: usize },
    #[error("invalid valency range {0:?}")]
    BadValencyRange(RangeInclusive<usize>),
    #[error("malformed checkpoint {path}: {reason}")]
    BadCheckpoint { path: PathBuf, reason: String },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CensusError + '_ {
    move |source| CensusError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusFilter {
    All,
    Vt,
    VtNonCayley,
}

impl std::str::FromStr for CensusFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(CensusFilter::All),
            "vt" => Ok(CensusFilter::Vt),
            "vt-noncayley" => Ok(CensusFilter::VtNonCayley),
            other => Err(format!("unknown filter {other:?} (expected all, vt or vt-noncayley)")),
        }
    }
}

impl CensusFilter {
    fn keeps(self, vt: bool, cayley: bool) -> bool {
        match self {
            CensusFilter::All => true,
            CensusFilter::Vt => vt,
            CensusFilter::VtNonCayley => vt && !cayley,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CensusConfig {
    /// A catalog file or a directory of them.
    pub catalog: PathBuf,
    /// Graph orders; a group of order g contributes graphs of order 2g.
    pub orders: RangeInclusive<usize>,
    pub valencies: RangeInclusive<usize>,
    pub filter: CensusFilter,
    pub workers: usize,
    /// JSON-lines record stream; appended to on resume.
    pub output: Option<PathBuf>,
    /// Holds the last completed stratum.
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    /// graph6 of the canonical form.
    pub certificate: String,
    pub order: usize,
    pub valency: usize,
    pub group: String,
    pub subset: Vec<usize>,
    pub vertex_transitive: bool,
    pub cayley: bool,
    pub haar: bool,
}

impl CensusRecord {
    /// Rebuilds H(G, S) from the provenance.
    pub fn rebuild(&self, group: &FiniteGroup) -> Graph {
        let s = ElementSubset::new(group, self.subset.iter().copied()).expect("recorded subset is valid");
        haar_graph(group, &s).expect("recorded subset is nonempty")
    }
}

/// A `(group index, subset size)` work unit, ordered as processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Stratum {
    pub group: usize,
    pub valency: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub strata: usize,
    pub strata_skipped: usize,
    pub representatives: u64,
    pub connected: u64,
    pub classes: usize,
    pub emitted: usize,
    pub emitted_by_valency: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, Default)]
pub struct CensusOutcome {
    /// Records emitted by this run, in emission order.
    pub records: Vec<CensusRecord>,
    pub summary: CensusSummary,
}

fn mask_of(members: impl IntoIterator<Item = usize>) -> u64 {
    members.into_iter().fold(0, |m, x| m | 1 << x)
}

fn members_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// The maps `S ↦ aSb` and `S ↦ aS⁻¹b` on bitmasks.
struct SubsetAction<'a> {
    group: &'a FiniteGroup,
}

impl SubsetAction<'_> {
    fn images(&self, mask: u64, mut f: impl FnMut(u64)) {
        let g = self.group;
        let members = members_of(mask);
        let inverted: Vec<usize> = members.iter().map(|&x| g.inv(x)).collect();
        for set in [&members, &inverted] {
            for a in g.elements() {
                for b in g.elements() {
                    f(mask_of(set.iter().map(|&x| g.mul(g.mul(a, x), b))));
                }
            }
        }
    }
}

/// Subsets of size `k` containing the identity, in increasing mask order.
fn subsets_with_identity(order: usize, k: usize) -> impl Iterator<Item = u64> {
    let free = order - 1;
    let mut next = if k == 0 || k > order {
        None
    } else if k == 1 {
        Some(0u64)
    } else {
        Some((1u64 << (k - 1)) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let n = (((r ^ cur) >> 2) / c) | r;
            (n < 1u64 << free).then_some(n)
        };
        Some(cur << 1 | 1)
    })
}

/// One subset per orbit of `S ↦ aSb, aS⁻¹b` among subsets of size `k`
/// that contain the identity (the least such mask of each orbit).
pub fn orbit_representatives(group: &FiniteGroup, k: usize) -> Vec<u64> {
    let action = SubsetAction { group };
    let n = group.order();
    if n <= BITMAP_MAX_ORDER {
        let mut seen = vec![false; 1 << (n - 1)];
        let mut reps = Vec::new();
        for mask in subsets_with_identity(n, k) {
            if seen[(mask >> 1) as usize] {
                continue;
            }
            reps.push(mask);
            action.images(mask, |img| {
                if img & 1 == 1 {
                    seen[(img >> 1) as usize] = true;
                }
            });
        }
        reps
    } else {
        subsets_with_identity(n, k)
            .filter(|&mask| {
                let mut minimal = true;
                action.images(mask, |img| minimal &= img & 1 == 0 || img >= mask);
                minimal
            })
            .collect()
    }
}

/// Certificates of the connected Haar graphs in one stratum, each with the
/// least subset producing it. With `reduce` off every subset containing
/// the identity is built (the soundness oracle for the reduction).
pub fn stratum_certificates(group: &FiniteGroup, k: usize, reduce: bool) -> BTreeMap<String, u64> {
    let masks: Vec<u64> =
        if reduce { orbit_representatives(group, k) } else { subsets_with_identity(group.order(), k).collect() };
    stratum_from_masks(group, &masks).0
}

fn stratum_from_masks(group: &FiniteGroup, masks: &[u64]) -> (BTreeMap<String, u64>, u64) {
    let found: Vec<(String, u64)> = masks
        .par_iter()
        .filter_map(|&mask| {
            let s = ElementSubset::new(group, members_of(mask)).expect("mask within group");
            let graph = haar_graph(group, &s).expect("nonempty subset");
            graph.is_connected().then(|| (canonical_form(&graph).as_str().to_owned(), mask))
        })
        .collect();
    let connected = found.len() as u64;
    let mut best: BTreeMap<String, u64> = BTreeMap::new();
    for (cert, mask) in found {
        best.entry(cert).and_modify(|m| *m = (*m).min(mask)).or_insert(mask);
    }
    (best, connected)
}

fn classify_class(group: &FiniteGroup, mask: u64) -> (bool, bool) {
    let s = ElementSubset::new(group, members_of(mask)).expect("mask within group");
    let graph = haar_graph(group, &s).expect("nonempty subset");
    let aut = crate::perm::PermGroup::new(graph.order(), search(&graph).generators).expect("same degree");
    let vt = aut.orbits().len() == 1;
    // Right multiplication by the group is semiregular on the two parts.
    let n = group.order();
    let right: Vec<Permutation> = group
        .elements()
        .map(|h| Permutation::from_fn(2 * n, |v| if v < n { group.mul(v, h) } else { n + group.mul(v - n, h) }))
        .collect();
    let cayley = vt && cayley_witness_with_hint(&graph, &aut, Some(&right)).is_some();
    (vt, cayley)
}

/// In-memory census driver. `on_stratum` sees each completed stratum's
/// new records before the next one starts.
pub fn run_census(
    groups: &[FiniteGroup],
    orders: &RangeInclusive<usize>,
    valencies: &RangeInclusive<usize>,
    filter: CensusFilter,
    resume_after: Option<Stratum>,
    seen: &mut HashSet<String>,
    mut on_stratum: impl FnMut(Stratum, &[CensusRecord]) -> Result<(), CensusError>,
) -> Result<CensusSummary, CensusError> {
    if valencies.is_empty() || *valencies.start() == 0 {
        return Err(CensusError::BadValencyRange(valencies.clone()));
    }
    let mut summary = CensusSummary::default();
    for (gi, group) in groups.iter().enumerate() {
        if group.order() > MAX_GROUP_ORDER {
            return Err(CensusError::GroupTooLarge { name: group.name().to_owned(), order: group.order() });
        }
        if !orders.contains(&(2 * group.order())) {
            continue;
        }
        for k in valencies.clone().filter(|&k| k <= group.order()) {
            let stratum = Stratum { group: gi, valency: k };
            if resume_after.is_some_and(|done| stratum <= done) {
                summary.strata_skipped += 1;
                continue;
            }
            let reps = orbit_representatives(group, k);
            summary.representatives += reps.len() as u64;
            let (best, connected) = stratum_from_masks(group, &reps);
            summary.connected += connected;
            let fresh: Vec<(String, u64)> = best.into_iter().filter(|(cert, _)| !seen.contains(cert)).collect();
            let flags: Vec<(bool, bool)> = fresh.par_iter().map(|&(_, mask)| classify_class(group, mask)).collect();
            let mut records = Vec::new();
            for ((cert, mask), (vt, cayley)) in fresh.into_iter().zip(flags) {
                summary.classes += 1;
                seen.insert(cert.clone());
                if filter.keeps(vt, cayley) {
                    records.push(CensusRecord {
                        certificate: cert,
                        order: 2 * group.order(),
                        valency: k,
                        group: group.name().to_owned(),
                        subset: members_of(mask),
                        vertex_transitive: vt,
                        cayley,
                        haar: true,
                    });
                }
            }
            summary.emitted += records.len();
            if !records.is_empty() {
                *summary.emitted_by_valency.entry(k).or_default() += records.len();
            }
            summary.strata += 1;
            on_stratum(stratum, &records)?;
        }
    }
    Ok(summary)
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointFile {
    last_completed: Stratum,
    group_name: String,
}

fn read_checkpoint(path: &Path) -> Result<Option<Stratum>, CensusError> {
    match fs::read_to_string(path) {
        Ok(text) if text.trim().is_empty() => Ok(None),
        Ok(text) => serde_json::from_str::<CheckpointFile>(&text)
            .map(|c| Some(c.last_completed))
            .map_err(|e| CensusError::BadCheckpoint { path: path.to_path_buf(), reason: e.to_string() }),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(CensusError::Io { path: path.to_path_buf(), source: e }),
    }
}

fn write_checkpoint(path: &Path, stratum: Stratum, group_name: &str) -> Result<(), CensusError> {
    let body = serde_json::to_string(&CheckpointFile { last_completed: stratum, group_name: group_name.to_owned() })
        .expect("checkpoint serializes");
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, body + "\n").map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// Certificates already in an output stream. A torn final line from an
/// interrupted run is cut off.
fn read_existing_output(path: &Path) -> Result<Vec<CensusRecord>, CensusError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(CensusError::Io { path: path.to_path_buf(), source: e }),
    };
    let mut records = Vec::new();
    let mut good_bytes = 0u64;
    for line in BufReader::new(file).lines() {
        let line = line.map_err(io_err(path))?;
        match serde_json::from_str::<CensusRecord>(&line) {
            Ok(rec) => {
                records.push(rec);
                good_bytes += line.len() as u64 + 1;
            }
            Err(_) => break,
        }
    }
    let file = OpenOptions::new().write(true).open(path).map_err(io_err(path))?;
    file.set_len(good_bytes).map_err(io_err(path))?;
    Ok(records)
}

/// Full census with file output and checkpoint/resume.
pub fn enumerate_haar_census(cfg: &CensusConfig) -> Result<CensusOutcome, CensusError> {
    let groups = load_catalog(&cfg.catalog)?;
    let resume_after = match &cfg.checkpoint {
        Some(path) => read_checkpoint(path)?,
        None => None,
    };
    let mut seen = HashSet::new();
    let mut out = match &cfg.output {
        Some(path) => {
            if resume_after.is_some() {
                seen.extend(read_existing_output(path)?.into_iter().map(|r| r.certificate));
            } else {
                File::create(path).map_err(io_err(path))?;
            }
            Some((OpenOptions::new().append(true).open(path).map_err(io_err(path))?, path.clone()))
        }
        None => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| CensusError::Pool(e.to_string()))?;
    let mut records = Vec::new();
    let summary = pool.install(|| {
        run_census(&groups, &cfg.orders, &cfg.valencies, cfg.filter, resume_after, &mut seen, |stratum, batch| {
            if let Some((file, path)) = out.as_mut() {
                for rec in batch {
                    let line = serde_json::to_string(rec).expect("record serializes");
                    writeln!(file, "{line}").map_err(io_err(path))?;
                }
                file.flush().map_err(io_err(path))?;
            }
            if let Some(path) = &cfg.checkpoint {
                write_checkpoint(path, stratum, groups[stratum.group].name())?;
            }
            records.extend_from_slice(batch);
            Ok(())
        })
    })?;
    Ok(CensusOutcome { records, summary })
}
