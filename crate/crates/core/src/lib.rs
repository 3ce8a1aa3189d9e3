//! Finite groups, Haar / Cayley / bi-Cayley graph constructions, an
//! automorphism-search engine, and symmetry classification of the
//! double generalized Petersen family.

pub mod catalog;
pub mod census;
pub mod classify;
pub mod graph;
pub mod graph6;
pub mod groups;
pub mod perm;
pub mod search;

pub use graph::{Bipartition, DgpKind, DgpLabeling, Graph, GraphError};
pub use groups::{ElementSubset, FiniteGroup, GroupError};
pub use perm::{PermGroup, Permutation};
