//! Alternative acyclic directed mixed graphs.
//!
//! Graphs here carry directed edges plus either undirected edges (the
//! alternative, AMP-style reading) or bidirected edges (the original
//! reading). The crate provides:
//!
//! - [`graph`]: the [`MixedGraph`] type, validation and node relations;
//! - [`separation`]: four equivalent separation criteria;
//! - [`markov`]: local and pairwise Markov statement generators;
//! - [`sem`]: linear-Gaussian structural equations, magnification and
//!   partial-correlation tests;
//! - [`docalc`]: the intervention operator and do-calculus rule premises;
//! - [`learner`]: exact penalty-minimising structure learning and an ASP
//!   exporter.

pub mod docalc;
pub mod enumerate;
pub mod format;
pub mod graph;
pub mod learner;
pub mod markov;
pub mod nodeset;
pub mod sem;
pub mod separation;

pub use graph::{Dialect, EdgeKind, GraphError, MixedGraph, Relation};
pub use nodeset::{NodeId, NodeSet, MAX_NODES};
pub use separation::{Criterion, SepError, SeparationQuery};
