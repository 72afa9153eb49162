//! Exact and randomized solvers for the vertex cover P3 problem and its
//! connected variant on graphs given with (or decomposed into) tree
//! decompositions of small width.
//!
//! * [`vcp3`]: deterministic dynamic program, `3^width` entries per node,
//!   min-plus subset convolution at join nodes, witness reconstruction.
//! * [`cutcount`]: Cut&Count parity dynamic program, `4^width` colorings per
//!   node, with isolation-lemma weights; one-sided Monte Carlo decision.
//! * [`oracle`] and [`generate`]: brute-force references and
//!   bounded-treewidth instance families used throughout the tests.

pub mod cli;
pub mod coloring;
pub mod convolution;
pub mod cutcount;
pub mod decomposition;
pub mod error;
pub mod eval;
pub mod format;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod vcp3;

pub use error::{Error, Result};
pub use graph::{is_connected_induced, is_vcp3_set, Graph, VertexSet};
