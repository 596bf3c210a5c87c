//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by loading, parsing, counting, and estimation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed edge line: {msg}")]
    MalformedEdge { line: usize, msg: String },

    #[error("line {line}: negative timestamp")]
    NegativeTimestamp { line: usize },

    #[error("line {line}: self-loop {vertex} -> {vertex}")]
    SelfLoop { line: usize, vertex: u64 },

    #[error("vertex id {id} exceeds the supported range")]
    VertexIdTooLarge { id: u64 },

    #[error("motif spec: {msg}")]
    MalformedMotif { msg: String },

    #[error("motif spec: edge {edge} endpoint {vertex} out of range (k = {k})")]
    MotifVertexOutOfRange { edge: usize, vertex: u32, k: u32 },

    #[error("motif spec: edge {edge} is a self-loop on vertex {vertex}")]
    MotifSelfLoop { edge: usize, vertex: u32 },

    #[error("motif spec: declared {l} edges but found {found}")]
    MotifEdgeCountMismatch { l: usize, found: usize },

    #[error("motif spec: vertex {vertex} appears in no edge")]
    MotifIsolatedVertex { vertex: u32 },

    #[error("motif spec: skeleton is disconnected")]
    MotifDisconnected,

    #[error("invalid time window: lo {lo} > hi {hi}")]
    InvalidWindow { lo: u64, hi: u64 },

    #[error("invalid estimator config: {msg}")]
    InvalidConfig { msg: String },

    #[error("motif is not a 3-edge star or triangle; wedge sampling does not apply")]
    UnsupportedMotif,

    #[error(
        "refusing brute-force enumeration: graph has {m} edges (cap {max_edges}), \
         motif has {l} edges (cap {max_motif_edges})"
    )]
    EnumerationGuard {
        m: usize,
        max_edges: usize,
        l: usize,
        max_motif_edges: usize,
    },

    #[error("count overflowed 64-bit range")]
    CountOverflow,

    #[error("stream edge at time {time} arrived after time {last}; stream is not chronological")]
    OutOfOrder { time: u64, last: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
