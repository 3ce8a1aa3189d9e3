//! Inputs shared by the benchmarks.

use std::path::PathBuf;

use haarforge::graph::double_generalized_petersen;
use haarforge::Graph;

pub fn dgp(n: usize, r: usize) -> Graph {
    double_generalized_petersen(n, r).expect("valid parameters").0
}

/// The order-20 catalog shipped with the repository.
pub fn order20_catalog() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/groups/order20")
}
