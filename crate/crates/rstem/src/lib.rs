//! Spanning trees with few reducible-stem leaves.
//!
//! The reducible stem of a spanning tree is the smallest subtree spanning
//! its branch vertices. This crate builds spanning trees whose reducible
//! stems have few leaves: a local search driven by a lexicographic
//! objective, exact oracles (full enumeration and determinant counting)
//! to check it, degree-sum statistics over distance-independent sets,
//! extremal family generators, and a harness that ties them together to
//! test sufficient conditions on claw-heavy graphs.

pub mod claims;
pub mod generate;
pub mod graph;
pub mod optimize;
pub mod oracle;
pub mod stats;
pub mod theorem;
pub mod tree;

pub use graph::{Edge, Graph};
pub use stats::{NodeBudget, Sigma};
pub use tree::{ObjectiveVector, SpanningTree, StemDecomposition};
