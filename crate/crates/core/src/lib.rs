//! Finding a connected pattern as an *induced* subgraph of a large
//! power-law graph.
//!
//! The library implements two randomized search strategies that first keep
//! only vertices whose degree falls in a window around `sqrt(mu * n)` and
//! then look for the pattern among the survivors: a random-partition search
//! ([`search::algorithm1`]) and a neighborhood-growth search
//! ([`search::algorithm2`]). Supporting pieces: an inhomogeneous random
//! graph (Chung-Lu style) generator ([`irg`]), edge-list ingestion with a
//! power-law exponent fit ([`ingest`]), brute-force test oracles
//! ([`oracle`]) and a replication harness ([`experiment`]).

pub mod experiment;
pub mod graph;
pub mod ingest;
pub mod irg;
pub mod oracle;
pub mod pattern;
pub mod rng;
pub mod search;

pub use graph::{BitAdjacency, Embedding, Graph, GraphError, VertexId};
pub use pattern::{ExpansionOrder, Pattern, PatternError};
pub use search::{DegreeWindow, SearchOutcome, WindowError};
