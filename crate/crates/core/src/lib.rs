//! Tie-strength measures on ego networks and a partner-prediction harness.
//!
//! The unit of work is one ego network: a center node, its neighbors, and
//! the links among them. [`dispersion`] scores each neighbor by how poorly
//! their mutual friends with the center connect to one another, under six
//! pluggable distance functions from [`distances`], with absolute,
//! normalized, parametric, and recursive variants. [`baselines`] adds
//! betweenness and network-constraint scores for comparison. [`ranking`]
//! turns score tables into deterministic predictions and evaluates them
//! over labeled corpora; [`features`] exports the structural feature matrix
//! for external model training; [`synthgen`] fabricates labeled corpora
//! with planted focus structure; [`corpus`] owns the on-disk formats.
//!
//! Everything is deterministic: fixed seeds, pinned tie-breaks, and
//! order-stable parallel merges, so identical inputs produce identical
//! bytes.

#![forbid(unsafe_code)]

pub mod baselines;
pub mod corpus;
pub mod dispersion;
pub mod distances;
pub mod error;
pub mod features;
pub mod fixtures;
pub mod graph;
pub mod ranking;
pub mod seed;
pub mod synthgen;

pub use error::{Error, Result};
pub use graph::{CommonNeighborSet, EgoNetwork, GraphView, NodeId};

/// Version string embedded in reports and schema sidecars.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Version of the report/schema JSON layout.
pub const SCHEMA_VERSION: u32 = 1;
