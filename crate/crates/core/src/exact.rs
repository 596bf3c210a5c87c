//! Exact motif counting by backtracking search.
//!
//! Counting is anchored per edge: `count_local(g, m, delta, e, j)` counts the
//! motif instances in which `e` plays motif edge `j`. Summing the
//! last-position counts over all edges counts every instance exactly once,
//! because an instance has exactly one temporally last edge.
//!
//! The search follows a precomputed matching order. A candidate for motif
//! position `i` must lie strictly between the keys of the nearest already
//! matched order neighbors (positions below and above `i`) and inside
//! `[t_max - delta, t_min + delta]`, where `t_min`/`t_max` range over the
//! matched edges. Both prunings are sound: they discard exactly the
//! extensions that can no longer satisfy the edge order or the duration
//! bound. All comparisons use the `(time, seq)` key, so ties are ordered
//! consistently everywhere.

use rayon::prelude::*;

use crate::graph::{AdjEntry, PairEntry, TemporalAccess, TemporalGraph};
use crate::motif::{MatchingOrder, MotifEdge, TemporalMotif};
use crate::{EdgeKey, EdgeSeq, Error, Result, TemporalEdge, Timestamp, VertexId};

/// Counters describing one backtracking run.
#[derive(Debug, Default, Clone, Copy)]
pub struct SearchStats {
    /// Candidate edges examined (range-count shortcuts count as one).
    pub expansions: u64,
}

/// A fully matched instance: graph edge seq-ids and times in motif order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotifInstance {
    pub edge_seqs: Vec<EdgeSeq>,
    pub times: Vec<Timestamp>,
}

impl MotifInstance {
    /// Re-checks the definition against the graph: strictly increasing
    /// `(time, seq)` keys, duration within `delta`, and an injective map of
    /// motif vertices onto the instance vertices.
    pub fn verify(
        &self,
        g: &TemporalGraph,
        motif: &TemporalMotif,
        delta: u64,
    ) -> std::result::Result<(), String> {
        let l = motif.l();
        if self.edge_seqs.len() != l || self.times.len() != l {
            return Err("instance length differs from motif".into());
        }
        let mut edges = Vec::with_capacity(l);
        for &seq in &self.edge_seqs {
            match g.edges().iter().find(|e| e.seq == seq) {
                Some(e) => edges.push(*e),
                None => return Err(format!("edge seq {seq} not in graph")),
            }
        }
        for (e, &t) in edges.iter().zip(&self.times) {
            if e.time != t {
                return Err("recorded time differs from graph edge".into());
            }
        }
        for w in edges.windows(2) {
            if w[0].key() >= w[1].key() {
                return Err("keys not strictly increasing in motif order".into());
            }
        }
        if edges[l - 1].time - edges[0].time > delta {
            return Err("duration exceeds delta".into());
        }
        let mut assigned: Vec<Option<VertexId>> = vec![None; motif.k()];
        for (me, ge) in motif.edges().iter().zip(&edges) {
            for (mv, gv) in [(me.src, ge.src), (me.dst, ge.dst)] {
                match assigned[mv as usize] {
                    None => {
                        if assigned.contains(&Some(gv)) {
                            return Err("vertex map not injective".into());
                        }
                        assigned[mv as usize] = Some(gv);
                    }
                    Some(prev) if prev == gv => {}
                    Some(_) => return Err("vertex map inconsistent".into()),
                }
            }
        }
        Ok(())
    }
}

pub(crate) trait Keyed {
    fn key(&self) -> EdgeKey;
    fn time(&self) -> Timestamp;
}

impl Keyed for AdjEntry {
    #[inline]
    fn key(&self) -> EdgeKey {
        AdjEntry::key(self)
    }
    #[inline]
    fn time(&self) -> Timestamp {
        self.time
    }
}

impl Keyed for PairEntry {
    #[inline]
    fn key(&self) -> EdgeKey {
        PairEntry::key(self)
    }
    #[inline]
    fn time(&self) -> Timestamp {
        self.time
    }
}

/// Index range of entries with key strictly above `lo_key`, strictly below
/// `hi_key`, and time within `[lo_t, hi_t]`. Two binary searches.
pub(crate) fn key_range<T: Keyed>(
    slice: &[T],
    lo_key: Option<EdgeKey>,
    lo_t: Timestamp,
    hi_key: Option<EdgeKey>,
    hi_t: Timestamp,
) -> (usize, usize) {
    let start =
        slice.partition_point(|ent| lo_key.is_some_and(|k| ent.key() <= k) || ent.time() < lo_t);
    let end =
        slice.partition_point(|ent| hi_key.is_none_or(|k| ent.key() < k) && ent.time() <= hi_t);
    (start, start.max(end))
}

trait Sink {
    /// Whether the engine may replace the final enumeration level with a
    /// range count when both endpoints are already mapped.
    const BULK: bool;
    fn emit_one(&mut self, matched: &[Option<EdgeKey>]);
    fn emit_bulk(&mut self, n: u64);
}

struct CountSink {
    total: u64,
}

impl Sink for CountSink {
    const BULK: bool = true;
    #[inline]
    fn emit_one(&mut self, _matched: &[Option<EdgeKey>]) {
        self.total += 1;
    }
    #[inline]
    fn emit_bulk(&mut self, n: u64) {
        self.total += n;
    }
}

struct CollectSink {
    out: Vec<MotifInstance>,
}

impl Sink for CollectSink {
    const BULK: bool = false;
    fn emit_one(&mut self, matched: &[Option<EdgeKey>]) {
        let keys: Vec<EdgeKey> = matched.iter().map(|k| k.unwrap()).collect();
        self.out.push(MotifInstance {
            edge_seqs: keys.iter().map(|k| k.1).collect(),
            times: keys.iter().map(|k| k.0).collect(),
        });
    }
    fn emit_bulk(&mut self, _n: u64) {
        unreachable!("collection never bulk-counts");
    }
}

struct Search<'a, A: TemporalAccess> {
    access: &'a A,
    edges: &'a [MotifEdge],
    order: &'a [usize],
    delta: u64,
    assigned: Vec<Option<VertexId>>,
    matched: Vec<Option<EdgeKey>>,
    stats: SearchStats,
}

impl<'a, A: TemporalAccess> Search<'a, A> {
    fn new(access: &'a A, motif: &'a TemporalMotif, order: &'a MatchingOrder, delta: u64) -> Self {
        Search {
            access,
            edges: motif.edges(),
            order: &order.positions,
            delta,
            assigned: vec![None; motif.k()],
            matched: vec![None; motif.l()],
            stats: SearchStats::default(),
        }
    }

    fn anchor(&mut self, e: &TemporalEdge) {
        let idx = self.order[0];
        let me = self.edges[idx];
        self.assigned[me.src as usize] = Some(e.src);
        self.assigned[me.dst as usize] = Some(e.dst);
        self.matched[idx] = Some(e.key());
    }

    fn descend<S: Sink>(&mut self, depth: usize, t_min: Timestamp, t_max: Timestamp, sink: &mut S) {
        let l = self.edges.len();
        if depth == l {
            sink.emit_one(&self.matched);
            return;
        }
        let idx = self.order[depth];
        let me = self.edges[idx];

        let mut lo_key = None;
        for w in (0..idx).rev() {
            if let Some(k) = self.matched[w] {
                lo_key = Some(k);
                break;
            }
        }
        let mut hi_key = None;
        for w in idx + 1..l {
            if let Some(k) = self.matched[w] {
                hi_key = Some(k);
                break;
            }
        }
        let lo_t = t_max.saturating_sub(self.delta);
        let hi_t = t_min.saturating_add(self.delta);

        let src_at = self.assigned[me.src as usize];
        let dst_at = self.assigned[me.dst as usize];
        match (src_at, dst_at) {
            (Some(a), Some(b)) => {
                let slice = self.access.pair_edges(a, b);
                let (s, e) = key_range(slice, lo_key, lo_t, hi_key, hi_t);
                if S::BULK && depth == l - 1 {
                    self.stats.expansions += 1;
                    sink.emit_bulk((e - s) as u64);
                    return;
                }
                for ent in &slice[s..e] {
                    self.stats.expansions += 1;
                    self.matched[idx] = Some(ent.key());
                    self.descend(depth + 1, t_min.min(ent.time), t_max.max(ent.time), sink);
                }
                self.matched[idx] = None;
            }
            (Some(a), None) => {
                let slice = self.access.out_edges(a);
                let (s, e) = key_range(slice, lo_key, lo_t, hi_key, hi_t);
                for ent in &slice[s..e] {
                    self.stats.expansions += 1;
                    let w = ent.other;
                    if self.assigned.contains(&Some(w)) {
                        continue;
                    }
                    self.assigned[me.dst as usize] = Some(w);
                    self.matched[idx] = Some(ent.key());
                    self.descend(depth + 1, t_min.min(ent.time), t_max.max(ent.time), sink);
                    self.assigned[me.dst as usize] = None;
                }
                self.matched[idx] = None;
            }
            (None, Some(b)) => {
                let slice = self.access.in_edges(b);
                let (s, e) = key_range(slice, lo_key, lo_t, hi_key, hi_t);
                for ent in &slice[s..e] {
                    self.stats.expansions += 1;
                    let w = ent.other;
                    if self.assigned.contains(&Some(w)) {
                        continue;
                    }
                    self.assigned[me.src as usize] = Some(w);
                    self.matched[idx] = Some(ent.key());
                    self.descend(depth + 1, t_min.min(ent.time), t_max.max(ent.time), sink);
                    self.assigned[me.src as usize] = None;
                }
                self.matched[idx] = None;
            }
            (None, None) => {
                unreachable!("matching orders keep every edge adjacent to the matched part")
            }
        }
    }
}

/// Instances with `e` at motif position `order.start`, searched in the given
/// order. Stats are accumulated into `stats`.
pub fn count_local_with_order<A: TemporalAccess>(
    access: &A,
    motif: &TemporalMotif,
    delta: u64,
    e: &TemporalEdge,
    order: &MatchingOrder,
    stats: &mut SearchStats,
) -> u64 {
    let mut search = Search::new(access, motif, order, delta);
    search.anchor(e);
    let mut sink = CountSink { total: 0 };
    search.descend(1, e.time, e.time, &mut sink);
    stats.expansions += search.stats.expansions;
    sink.total
}

/// Like [`count_local_with_order`] but materializing the instances.
pub fn collect_local_with_order<A: TemporalAccess>(
    access: &A,
    motif: &TemporalMotif,
    delta: u64,
    e: &TemporalEdge,
    order: &MatchingOrder,
) -> Vec<MotifInstance> {
    let mut search = Search::new(access, motif, order, delta);
    search.anchor(e);
    let mut sink = CollectSink { out: Vec::new() };
    search.descend(1, e.time, e.time, &mut sink);
    sink.out
}

/// Number of motif instances in which `e` plays motif edge `j`.
pub fn count_local(
    g: &TemporalGraph,
    motif: &TemporalMotif,
    delta: u64,
    e: &TemporalEdge,
    j: usize,
) -> u64 {
    let mut stats = SearchStats::default();
    count_local_with_order(g, motif, delta, e, &motif.matching_orders()[j], &mut stats)
}

/// [`count_local`] with the search statistics returned.
pub fn count_local_stats(
    g: &TemporalGraph,
    motif: &TemporalMotif,
    delta: u64,
    e: &TemporalEdge,
    j: usize,
) -> (u64, SearchStats) {
    let mut stats = SearchStats::default();
    let n = count_local_with_order(g, motif, delta, e, &motif.matching_orders()[j], &mut stats);
    (n, stats)
}

/// Number of instances whose temporally last edge is `e`.
///
/// All other instance edges precede `e`, so this works equally over a full
/// graph or over a streaming window holding only `[e.time - delta, e.time]`.
pub fn count_local_last<A: TemporalAccess>(
    access: &A,
    motif: &TemporalMotif,
    delta: u64,
    e: &TemporalEdge,
) -> u64 {
    let l = motif.l();
    let order = &motif.matching_orders()[l - 1];
    let mut stats = SearchStats::default();
    count_local_with_order(access, motif, delta, e, order, &mut stats)
}

/// [`count_local_last`] with search statistics.
pub fn count_local_last_stats<A: TemporalAccess>(
    access: &A,
    motif: &TemporalMotif,
    delta: u64,
    e: &TemporalEdge,
) -> (u64, SearchStats) {
    let l = motif.l();
    let order = &motif.matching_orders()[l - 1];
    let mut stats = SearchStats::default();
    let n = count_local_with_order(access, motif, delta, e, order, &mut stats);
    (n, stats)
}

fn finish_count(total: u128) -> Result<u64> {
    u64::try_from(total).map_err(|_| Error::CountOverflow)
}

/// Exact instance count: sums the last-position count over every edge, so
/// each instance is counted exactly once at its final edge.
pub fn exact_count(g: &TemporalGraph, motif: &TemporalMotif, delta: u64) -> Result<u64> {
    let total: u128 = g
        .edges()
        .par_iter()
        .map(|e| count_local_last(g, motif, delta, e) as u128)
        .sum();
    finish_count(total)
}

/// Exact count anchored at motif position `j`: sums `count_local(e, j)` over
/// every edge. Every position yields the same total, since each instance has
/// exactly one edge at position `j`.
pub fn exact_count_by_position(
    g: &TemporalGraph,
    motif: &TemporalMotif,
    delta: u64,
    j: usize,
) -> Result<u64> {
    let order = &motif.matching_orders()[j];
    exact_count_with_order(g, motif, delta, order)
}

/// Exact count using an arbitrary matching order (anchor = `order.start`).
pub fn exact_count_with_order(
    g: &TemporalGraph,
    motif: &TemporalMotif,
    delta: u64,
    order: &MatchingOrder,
) -> Result<u64> {
    let total: u128 = g
        .edges()
        .par_iter()
        .map(|e| {
            let mut stats = SearchStats::default();
            count_local_with_order(g, motif, delta, e, order, &mut stats) as u128
        })
        .sum();
    finish_count(total)
}
