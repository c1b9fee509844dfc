//! Parametrize trees by the order, size, and minimum degree of their smaller
//! partite set; decompose them into the core sets driving join-host
//! embeddings; and compute the matching spectral-radius bounds with exact
//! brute-force oracles at small scale.

pub mod construct;
pub mod decompose;
pub mod embed;
pub mod graph;
pub mod hypothesis;
pub mod lab;
pub mod spectral;
pub mod tree;

pub use decompose::{decompose, Decomposition, InducedForest};
pub use embed::{EmbeddingMap, JoinHost, SearchOutcome};
pub use graph::{Graph, GraphError};
pub use hypothesis::{HypothesisCertificate, WitnessSearch};
pub use lab::{SmallGraph, SpexReport};
pub use spectral::{SpectralRadius, SpexBounds};
pub use tree::{family_feasible, profile, LabeledTree, TreeError, TreeProfile};
