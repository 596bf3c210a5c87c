//! Temporal edge lists and the indexed in-memory graph.
//!
//! The on-disk format is one `src dst time` triple per line, whitespace
//! separated, with `#`/`%` comment lines and blank lines ignored. Vertex ids
//! are arbitrary non-negative 64-bit integers and are remapped to dense
//! `0..n` in first-appearance order; the original labels are retained.
//!
//! After construction a [`TemporalGraph`] is immutable: edges sorted by
//! `(time, seq)`, per-vertex out/in adjacency sorted the same way, and a
//! per-pair timestamp index for `O(log h)` range counting.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::Error;
use crate::{EdgeKey, EdgeSeq, Result, Timestamp, VertexId};

/// One directed temporal edge. `seq` is the 0-based ingestion index; the
/// pair `(time, seq)` totally orders all edges of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TemporalEdge {
    pub src: VertexId,
    pub dst: VertexId,
    pub time: Timestamp,
    pub seq: EdgeSeq,
}

impl TemporalEdge {
    #[inline]
    pub fn key(&self) -> EdgeKey {
        (self.time, self.seq)
    }
}

/// Adjacency entry: the far endpoint of an incident edge plus its key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjEntry {
    pub other: VertexId,
    pub time: Timestamp,
    pub seq: EdgeSeq,
}

impl AdjEntry {
    #[inline]
    pub fn key(&self) -> EdgeKey {
        (self.time, self.seq)
    }
}

/// Per-pair index entry: key of one `u -> v` edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairEntry {
    pub time: Timestamp,
    pub seq: EdgeSeq,
}

impl PairEntry {
    #[inline]
    pub fn key(&self) -> EdgeKey {
        (self.time, self.seq)
    }
}

/// What to do with `u -> u` edges in the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelfLoopPolicy {
    /// Fail loading with the offending line number.
    #[default]
    Reject,
    /// Drop the edge and continue.
    Skip,
}

/// Loader configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct LoaderOptions {
    pub self_loops: SelfLoopPolicy,
    /// When `false`, input ids are taken as dense ids verbatim instead of
    /// being remapped in first-appearance order.
    pub remap: bool,
}

impl LoaderOptions {
    pub fn new() -> Self {
        LoaderOptions {
            self_loops: SelfLoopPolicy::Reject,
            remap: true,
        }
    }

    pub fn skip_self_loops(mut self) -> Self {
        self.self_loops = SelfLoopPolicy::Skip;
        self
    }
}

/// Read-only access to time-sorted incident edges and per-pair keys.
///
/// Implemented by the full graph and by the streaming active window, so the
/// backtracking search runs unchanged over either.
pub trait TemporalAccess {
    /// Out-edges of `v`, ascending by `(time, seq)`.
    fn out_edges(&self, v: VertexId) -> &[AdjEntry];
    /// In-edges of `v`, ascending by `(time, seq)`.
    fn in_edges(&self, v: VertexId) -> &[AdjEntry];
    /// Keys of `u -> v` edges, ascending.
    fn pair_edges(&self, u: VertexId, v: VertexId) -> &[PairEntry];
}

/// An immutable directed temporal multigraph with search indices.
///
/// Thread-safe for concurrent reads; all views borrow from the graph.
#[derive(Debug, Clone)]
pub struct TemporalGraph {
    n: usize,
    /// All edges sorted by `(time, seq)`.
    edges: Vec<TemporalEdge>,
    out_adj: Vec<Vec<AdjEntry>>,
    in_adj: Vec<Vec<AdjEntry>>,
    pair_index: HashMap<(VertexId, VertexId), Vec<PairEntry>>,
    /// Original input label per dense vertex id (identity when not remapped).
    labels: Vec<u64>,
}

/// A contiguous run of edges with `time` in `[lo, hi]`, borrowed from a graph.
#[derive(Debug, Clone, Copy)]
pub struct TimeWindowView<'a> {
    graph: &'a TemporalGraph,
    lo: Timestamp,
    hi: Timestamp,
    start: usize,
    end: usize,
}

impl TemporalGraph {
    /// Builds a graph from `(src, dst, time)` triples in ingestion order.
    /// Positions in error messages are 1-based triple indices.
    pub fn from_triples<I>(triples: I, opts: &LoaderOptions) -> Result<TemporalGraph>
    where
        I: IntoIterator<Item = (u64, u64, u64)>,
    {
        let numbered = triples.into_iter().enumerate().map(|(i, t)| (i + 1, t));
        Self::from_numbered_triples(numbered, opts)
    }

    fn from_numbered_triples<I>(triples: I, opts: &LoaderOptions) -> Result<TemporalGraph>
    where
        I: IntoIterator<Item = (usize, (u64, u64, u64))>,
    {
        let mut remap: HashMap<u64, VertexId> = HashMap::new();
        let mut labels: Vec<u64> = Vec::new();
        let mut edges: Vec<TemporalEdge> = Vec::new();
        let mut max_dense: u64 = 0;

        for (line, (src_raw, dst_raw, time)) in triples {
            if src_raw == dst_raw {
                match opts.self_loops {
                    SelfLoopPolicy::Reject => {
                        return Err(Error::SelfLoop {
                            line,
                            vertex: src_raw,
                        })
                    }
                    SelfLoopPolicy::Skip => continue,
                }
            }
            let (src, dst) = if opts.remap {
                let mut intern = |raw: u64| -> VertexId {
                    *remap.entry(raw).or_insert_with(|| {
                        labels.push(raw);
                        (labels.len() - 1) as VertexId
                    })
                };
                (intern(src_raw), intern(dst_raw))
            } else {
                if src_raw > u32::MAX as u64 {
                    return Err(Error::VertexIdTooLarge { id: src_raw });
                }
                if dst_raw > u32::MAX as u64 {
                    return Err(Error::VertexIdTooLarge { id: dst_raw });
                }
                max_dense = max_dense.max(src_raw).max(dst_raw);
                (src_raw as VertexId, dst_raw as VertexId)
            };
            let seq = edges.len() as EdgeSeq;
            edges.push(TemporalEdge {
                src,
                dst,
                time,
                seq,
            });
        }

        let n = if opts.remap {
            labels.len()
        } else if edges.is_empty() {
            0
        } else {
            (max_dense + 1) as usize
        };
        if !opts.remap {
            labels = (0..n as u64).collect();
        }

        edges.sort_unstable_by_key(|e| e.key());

        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut pair_index: HashMap<(VertexId, VertexId), Vec<PairEntry>> = HashMap::new();
        for e in &edges {
            out_adj[e.src as usize].push(AdjEntry {
                other: e.dst,
                time: e.time,
                seq: e.seq,
            });
            in_adj[e.dst as usize].push(AdjEntry {
                other: e.src,
                time: e.time,
                seq: e.seq,
            });
            pair_index
                .entry((e.src, e.dst))
                .or_default()
                .push(PairEntry {
                    time: e.time,
                    seq: e.seq,
                });
        }

        Ok(TemporalGraph {
            n,
            edges,
            out_adj,
            in_adj,
            pair_index,
            labels,
        })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// All edges, ascending by `(time, seq)`.
    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    /// Original input label of a dense vertex id.
    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v as usize]
    }

    /// Total temporal degree: in-edges plus out-edges incident to `v`.
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        if v >= self.n {
            return 0;
        }
        self.out_adj[v].len() + self.in_adj[v].len()
    }

    /// `(t_min, t_max)` over all edges, or `None` for an empty graph.
    pub fn time_span(&self) -> Option<(Timestamp, Timestamp)> {
        if self.edges.is_empty() {
            None
        } else {
            Some((self.edges[0].time, self.edges[self.edges.len() - 1].time))
        }
    }

    /// View of the edges with `time` in the closed interval `[lo, hi]`.
    /// Binary search over the sorted edge list, `O(log m)`.
    pub fn window(&self, lo: Timestamp, hi: Timestamp) -> Result<TimeWindowView<'_>> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        let start = self.edges.partition_point(|e| e.time < lo);
        let end = self.edges.partition_point(|e| e.time <= hi);
        Ok(TimeWindowView {
            graph: self,
            lo,
            hi,
            start,
            end,
        })
    }

    /// Counts `u -> v` edges with time in the interval from `lo` to `hi`,
    /// each bound open (strict) or closed. `O(log h)` for `h` pair edges.
    pub fn count_pair_edges_in_range(
        &self,
        u: VertexId,
        v: VertexId,
        lo: Timestamp,
        hi: Timestamp,
        open_lo: bool,
        open_hi: bool,
    ) -> u64 {
        let s = self.pair_edges(u, v);
        let start = if open_lo {
            s.partition_point(|e| e.time <= lo)
        } else {
            s.partition_point(|e| e.time < lo)
        };
        let end = if open_hi {
            s.partition_point(|e| e.time < hi)
        } else {
            s.partition_point(|e| e.time <= hi)
        };
        end.saturating_sub(start) as u64
    }

    /// Structural self-check used by tests: sortedness of every index and
    /// agreement of all per-edge views.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        if !self.edges.windows(2).all(|w| w[0].key() < w[1].key()) {
            return Err("edges not strictly sorted by (time, seq)".into());
        }
        let mut out_total = 0usize;
        let mut in_total = 0usize;
        for v in 0..self.n {
            let out = &self.out_adj[v];
            if !out.windows(2).all(|w| w[0].key() < w[1].key()) {
                return Err(format!("out_adj[{v}] not sorted"));
            }
            let inn = &self.in_adj[v];
            if !inn.windows(2).all(|w| w[0].key() < w[1].key()) {
                return Err(format!("in_adj[{v}] not sorted"));
            }
            out_total += out.len();
            in_total += inn.len();
        }
        if out_total != self.m() || in_total != self.m() {
            return Err("adjacency does not partition the edge set".into());
        }
        let pair_total: usize = self.pair_index.values().map(Vec::len).sum();
        if pair_total != self.m() {
            return Err("pair index does not partition the edge set".into());
        }
        for ((u, v), entries) in &self.pair_index {
            if !entries.windows(2).all(|w| w[0].key() < w[1].key()) {
                return Err(format!("pair_index[({u},{v})] not sorted"));
            }
            for e in entries {
                let found = self
                    .edges
                    .binary_search_by_key(&e.key(), |g| g.key())
                    .ok()
                    .map(|i| &self.edges[i]);
                match found {
                    Some(g) if g.src == *u && g.dst == *v => {}
                    _ => return Err(format!("pair_index[({u},{v})] references a missing edge")),
                }
            }
        }
        Ok(())
    }
}

impl TemporalAccess for TemporalGraph {
    #[inline]
    fn out_edges(&self, v: VertexId) -> &[AdjEntry] {
        self.out_adj.get(v as usize).map_or(&[], Vec::as_slice)
    }

    #[inline]
    fn in_edges(&self, v: VertexId) -> &[AdjEntry] {
        self.in_adj.get(v as usize).map_or(&[], Vec::as_slice)
    }

    #[inline]
    fn pair_edges(&self, u: VertexId, v: VertexId) -> &[PairEntry] {
        self.pair_index.get(&(u, v)).map_or(&[], Vec::as_slice)
    }
}

impl<'a> TimeWindowView<'a> {
    pub fn lo(&self) -> Timestamp {
        self.lo
    }

    pub fn hi(&self) -> Timestamp {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn edges(&self) -> &'a [TemporalEdge] {
        &self.graph.edges[self.start..self.end]
    }

    pub fn iter(&self) -> impl Iterator<Item = &'a TemporalEdge> {
        self.edges().iter()
    }
}

fn parse_edge_line(line: &str, lineno: usize) -> Result<Option<(u64, u64, u64)>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
        return Ok(None);
    }
    let mut it = trimmed.split_whitespace();
    let mut field = |name: &str| -> Result<&str> {
        it.next().ok_or_else(|| Error::MalformedEdge {
            line: lineno,
            msg: format!("missing {name}"),
        })
    };
    let src_s = field("source")?;
    let dst_s = field("destination")?;
    let time_s = field("timestamp")?;
    if it.next().is_some() {
        return Err(Error::MalformedEdge {
            line: lineno,
            msg: "too many fields".into(),
        });
    }
    let parse_u64 = |s: &str, what: &str| -> Result<u64> {
        if s.starts_with('-') {
            if what == "timestamp" {
                return Err(Error::NegativeTimestamp { line: lineno });
            }
            return Err(Error::MalformedEdge {
                line: lineno,
                msg: format!("negative {what} {s}"),
            });
        }
        s.parse::<u64>().map_err(|_| Error::MalformedEdge {
            line: lineno,
            msg: format!("invalid {what} {s:?}"),
        })
    };
    let src = parse_u64(src_s, "vertex id")?;
    let dst = parse_u64(dst_s, "vertex id")?;
    let time = parse_u64(time_s, "timestamp")?;
    Ok(Some((src, dst, time)))
}

/// Loads an edge list from any buffered reader.
pub fn load_edge_list_reader<R: BufRead>(reader: R, opts: &LoaderOptions) -> Result<TemporalGraph> {
    let mut triples: Vec<(usize, (u64, u64, u64))> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(t) = parse_edge_line(&line, i + 1)? {
            triples.push((i + 1, t));
        }
    }
    TemporalGraph::from_numbered_triples(triples, opts)
}

/// Loads an edge list from a file path.
pub fn load_edge_list<P: AsRef<Path>>(path: P, opts: &LoaderOptions) -> Result<TemporalGraph> {
    let file = File::open(path)?;
    load_edge_list_reader(BufReader::new(file), opts)
}

/// Writes the graph back out as edge-list text in ingestion order with the
/// original vertex labels, so reloading reproduces the same edge sequence.
pub fn write_edge_list<W: Write>(g: &TemporalGraph, mut w: W) -> std::io::Result<()> {
    let mut by_seq: Vec<&TemporalEdge> = g.edges().iter().collect();
    by_seq.sort_unstable_by_key(|e| e.seq);
    for e in by_seq {
        writeln!(w, "{} {} {}", g.label(e.src), g.label(e.dst), e.time)?;
    }
    Ok(())
}

/// Incremental reader for chronological streams: parses lines one at a time
/// and remaps vertex ids on the fly without materializing the edge list.
pub struct EdgeListStream<R: BufRead> {
    reader: R,
    opts: LoaderOptions,
    remap: HashMap<u64, VertexId>,
    labels: Vec<u64>,
    lineno: usize,
    emitted: u64,
    buf: String,
}

impl<R: BufRead> EdgeListStream<R> {
    pub fn new(reader: R, opts: LoaderOptions) -> Self {
        EdgeListStream {
            reader,
            opts,
            remap: HashMap::new(),
            labels: Vec::new(),
            lineno: 0,
            emitted: 0,
            buf: String::new(),
        }
    }

    /// Distinct vertices seen so far.
    pub fn vertices_seen(&self) -> usize {
        if self.opts.remap {
            self.labels.len()
        } else {
            self.remap.len()
        }
    }

    fn intern(&mut self, raw: u64) -> Result<VertexId> {
        if self.opts.remap {
            if let Some(&v) = self.remap.get(&raw) {
                return Ok(v);
            }
            let v = self.labels.len() as VertexId;
            self.labels.push(raw);
            self.remap.insert(raw, v);
            Ok(v)
        } else {
            if raw > u32::MAX as u64 {
                return Err(Error::VertexIdTooLarge { id: raw });
            }
            self.remap.entry(raw).or_insert(raw as VertexId);
            Ok(raw as VertexId)
        }
    }

    /// Next edge, or `None` at end of input. `seq` counts emitted edges.
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<Result<TemporalEdge>> {
        loop {
            self.buf.clear();
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e.into())),
            }
            self.lineno += 1;
            let parsed = match parse_edge_line(&self.buf, self.lineno) {
                Ok(Some(t)) => t,
                Ok(None) => continue,
                Err(e) => return Some(Err(e)),
            };
            let (src_raw, dst_raw, time) = parsed;
            if src_raw == dst_raw {
                match self.opts.self_loops {
                    SelfLoopPolicy::Reject => {
                        return Some(Err(Error::SelfLoop {
                            line: self.lineno,
                            vertex: src_raw,
                        }))
                    }
                    SelfLoopPolicy::Skip => continue,
                }
            }
            let src = match self.intern(src_raw) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            let dst = match self.intern(dst_raw) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            let seq = self.emitted;
            self.emitted += 1;
            return Some(Ok(TemporalEdge {
                src,
                dst,
                time,
                seq,
            }));
        }
    }
}
