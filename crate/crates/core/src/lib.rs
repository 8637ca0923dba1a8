//! Shortcut sets and exact hopsets for directed graphs.

pub mod chain;
pub mod chain_greedy;
pub mod dist;
pub mod error;
pub mod graph;
pub mod greedy;
pub mod perturb;
pub mod harness;
pub mod reach;
pub mod scalar;
pub mod scc;
pub mod setcover;
pub mod supershortcut;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use graph::{DiGraph, ShortcutEdge, ShortcutSet};
pub use scalar::Weight;

/// Integer-weighted graph, the default for generated and unweighted inputs.
pub type Graph = DiGraph<u64>;
/// Graph with exact rational weights.
pub type RationalGraph = DiGraph<num_rational::BigRational>;
/// Graph with floating-point weights.
pub type FloatGraph = DiGraph<f64>;
