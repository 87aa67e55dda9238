//! Spectral determinants of quantum graphs with Neumann–Kirchhoff vertex
//! conditions, and recovery of spanning-tree counts from them.
//!
//! The crate is `no_std` and needs only `alloc`. The `oracle` feature (on by
//! default) adds the brute-force spanning-tree counter and the catalog of
//! small connected graphs.

#![no_std]
// `!(x > 0.0)` style guards are kept on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bounds;
pub mod fixtures;
pub mod graph;
pub mod linalg;
pub mod matrices;
pub mod quantum_det;
pub mod spanning_trees;
pub mod special;
pub mod spectrum_oracle;
pub mod zeta;

pub use bounds::{BoundError, BoundReport, Sense};
pub use graph::{Graph, GraphError, GraphShape, MetricGraph};
pub use matrices::{LaplacianKind, LaplacianMatrix, SpectrumError, SpectrumReal};
pub use quantum_det::{DeterminantReport, DeterminantRoute, TreeEstimate};
pub use spanning_trees::{CountMethod, TreeCount, TreeCountError, TreeCountSummary};
pub use spectrum_oracle::{OracleError, QuantumSpectrum, SpectrumSource};
pub use zeta::{PhaseSet, ZetaError, ZetaEvaluation, ZetaRoute};
