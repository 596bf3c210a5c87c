//! Counting temporal motifs in directed temporal graphs.
//!
//! A temporal graph is a multiset of directed edges `(src, dst, time)`.
//! A temporal motif prescribes a small pattern of vertices together with an
//! ordered sequence of edges; an instance of the motif is a set of graph
//! edges that matches the pattern, respects the prescribed edge order, and
//! fits inside a duration window `delta`.
//!
//! The crate provides:
//! - [`graph`]: edge-list loading and the indexed in-memory representation,
//! - [`motif`]: motif parsing, classification, and matching orders,
//! - [`exact`]: exact counts via backtracking search,
//! - [`naive`]: a brute-force enumerator used as a correctness oracle,
//! - [`offline`]: edge-sampling and edge-wedge-sampling estimators,
//! - [`stream`]: single-pass reservoir estimators over chronological streams.

pub mod error;
pub mod exact;
pub mod graph;
pub mod motif;
pub mod naive;
pub mod offline;
pub mod sampling;
pub mod stream;

pub use error::Error;
pub use graph::{LoaderOptions, SelfLoopPolicy, TemporalEdge, TemporalGraph, TimeWindowView};
pub use motif::{MatchingOrder, MotifClass, TemporalMotif};

/// Dense vertex identifier, `0..n`.
pub type VertexId = u32;
/// Edge timestamp (non-negative integer time units).
pub type Timestamp = u64;
/// Ingestion index of an edge; breaks timestamp ties into a total order.
pub type EdgeSeq = u64;

/// Total-order key of an edge: timestamps first, ingestion order second.
pub type EdgeKey = (Timestamp, EdgeSeq);

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
