//! Single-pass estimators over chronological edge streams.
//!
//! The state keeps (a) the active window: every stream edge within `delta`
//! of the latest time, indexed like the full graph so the backtracking
//! search runs on it directly, and (b) a uniform reservoir of up to `r`
//! edges. When edge `e` arrives it enters the window first; if it enters the
//! reservoir, its local count (instances ending at `e`, which live entirely
//! inside the window) is computed once and stored. The running counter is
//! the sum of stored counts; eviction subtracts the stored value, never a
//! recomputed one, keeping the estimator's bookkeeping consistent with the
//! values that entered it.
//!
//! The estimate is `counter` while fewer than `r` edges have arrived and
//! `(m_t / r) * counter` afterwards. The wedge-sampled variant stores the
//! wedge-stage numerator instead and divides by `q` at estimate time, so all
//! stored state stays integral.

use std::collections::HashMap;

use crate::exact::count_local_last_stats;
use crate::graph::{AdjEntry, PairEntry, SelfLoopPolicy, TemporalAccess};
use crate::motif::{MotifClass, TemporalMotif};
use crate::offline::{build_wedge_tables, wedge_numerator, WedgeStats, WedgeTables};
use crate::sampling::{accept, pick_index, DOMAIN_RESERVOIR_COIN, DOMAIN_RESERVOIR_VICTIM};
use crate::{EdgeSeq, Error, Result, TemporalEdge, Timestamp, VertexId};

/// Which streaming estimator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamMode {
    /// Reservoir edge sampling with exact local counts.
    Ses,
    /// Reservoir edge sampling with wedge-sampled local counts
    /// (3-edge stars and triangles only).
    Sews,
}

/// What to do when an edge arrives with a timestamp earlier than the latest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DisorderPolicy {
    /// Return an error (the stream is supposed to be chronological).
    #[default]
    Error,
    /// Drop the edge, log a warning, and continue.
    DropWarn,
}

/// Streaming estimator parameters.
#[derive(Debug, Clone, Copy)]
pub struct StreamConfig {
    /// Motif duration bound; also the active window width.
    pub delta: u64,
    /// Reservoir capacity (at least 1).
    pub r: u64,
    /// Wedge sampling probability for [`StreamMode::Sews`], in `(0, 1]`.
    pub q: f64,
    /// Seed for the reservoir coin flips, victim picks, and wedge sampling.
    pub seed: u64,
    pub disorder: DisorderPolicy,
    pub self_loops: SelfLoopPolicy,
}

impl StreamConfig {
    pub fn new(delta: u64, r: u64, q: f64, seed: u64) -> Self {
        StreamConfig {
            delta,
            r,
            q,
            seed,
            disorder: DisorderPolicy::Error,
            self_loops: SelfLoopPolicy::Reject,
        }
    }

    pub fn lenient(mut self) -> Self {
        self.disorder = DisorderPolicy::DropWarn;
        self
    }
}

/// Estimate snapshot after a push.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamEstimate {
    pub value: f64,
    /// Stream edges seen so far (accepted pushes).
    pub m_t: u64,
    /// Time of the latest accepted edge (0 before the first push).
    pub timestamp: Timestamp,
}

/// Work counters accumulated across pushes.
#[derive(Debug, Default, Clone, Copy)]
pub struct StreamStats {
    /// Backtracking candidate expansions (exact local counts).
    pub expansions: u64,
    /// Wedge candidates examined (wedge-sampled local counts).
    pub wedge_candidates: u64,
    /// Closing-edge range counts performed.
    pub closing_searches: u64,
    /// Local counts computed (reservoir insertions).
    pub local_counts: u64,
}

/// Vec with an evicted prefix; keeps slice access contiguous while giving
/// amortized O(1) front removal.
#[derive(Debug)]
struct FrontVec<T> {
    buf: Vec<T>,
    head: usize,
}

impl<T> Default for FrontVec<T> {
    fn default() -> Self {
        FrontVec {
            buf: Vec::new(),
            head: 0,
        }
    }
}

impl<T> FrontVec<T> {
    fn push(&mut self, v: T) {
        self.buf.push(v);
    }

    fn front(&self) -> Option<&T> {
        self.buf.get(self.head)
    }

    fn pop_front(&mut self) -> Option<T>
    where
        T: Copy,
    {
        let v = *self.buf.get(self.head)?;
        self.head += 1;
        if self.head >= 32 && self.head * 2 >= self.buf.len() {
            self.buf.drain(..self.head);
            self.head = 0;
        }
        Some(v)
    }

    fn len(&self) -> usize {
        self.buf.len() - self.head
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn as_slice(&self) -> &[T] {
        &self.buf[self.head..]
    }
}

/// The active window: stream edges with `time >= t_now - delta`, indexed by
/// vertex and by pair. Entries arrive in key order and are evicted from the
/// front, so every index stays sorted.
#[derive(Debug, Default)]
struct ActiveWindow {
    ring: FrontVec<TemporalEdge>,
    out: HashMap<VertexId, FrontVec<AdjEntry>>,
    inn: HashMap<VertexId, FrontVec<AdjEntry>>,
    pairs: HashMap<(VertexId, VertexId), FrontVec<PairEntry>>,
}

impl ActiveWindow {
    fn push(&mut self, e: TemporalEdge) {
        self.ring.push(e);
        self.out.entry(e.src).or_default().push(AdjEntry {
            other: e.dst,
            time: e.time,
            seq: e.seq,
        });
        self.inn.entry(e.dst).or_default().push(AdjEntry {
            other: e.src,
            time: e.time,
            seq: e.seq,
        });
        self.pairs
            .entry((e.src, e.dst))
            .or_default()
            .push(PairEntry {
                time: e.time,
                seq: e.seq,
            });
    }

    /// Removes edges with `time < cut`. Evicted edges left their indices'
    /// fronts in the same order they entered, so each removal is O(1).
    fn evict_before(&mut self, cut: Timestamp) {
        while let Some(front) = self.ring.front() {
            if front.time >= cut {
                break;
            }
            let e = *front;
            self.ring.pop_front();
            if let Some(list) = self.out.get_mut(&e.src) {
                let gone = list.pop_front();
                debug_assert_eq!(gone.map(|a| a.seq), Some(e.seq));
                if list.is_empty() {
                    self.out.remove(&e.src);
                }
            }
            if let Some(list) = self.inn.get_mut(&e.dst) {
                let gone = list.pop_front();
                debug_assert_eq!(gone.map(|a| a.seq), Some(e.seq));
                if list.is_empty() {
                    self.inn.remove(&e.dst);
                }
            }
            if let Some(list) = self.pairs.get_mut(&(e.src, e.dst)) {
                let gone = list.pop_front();
                debug_assert_eq!(gone.map(|a| a.seq), Some(e.seq));
                if list.is_empty() {
                    self.pairs.remove(&(e.src, e.dst));
                }
            }
        }
    }

    fn len(&self) -> usize {
        self.ring.len()
    }

    fn degree(&self, v: VertexId) -> usize {
        self.out.get(&v).map_or(0, FrontVec::len) + self.inn.get(&v).map_or(0, FrontVec::len)
    }

    /// Live index entries (ring + out + in + pair + nothing else).
    fn items(&self) -> usize {
        4 * self.ring.len()
    }
}

impl TemporalAccess for ActiveWindow {
    fn out_edges(&self, v: VertexId) -> &[AdjEntry] {
        self.out.get(&v).map_or(&[], FrontVec::as_slice)
    }

    fn in_edges(&self, v: VertexId) -> &[AdjEntry] {
        self.inn.get(&v).map_or(&[], FrontVec::as_slice)
    }

    fn pair_edges(&self, u: VertexId, v: VertexId) -> &[PairEntry] {
        self.pairs.get(&(u, v)).map_or(&[], FrontVec::as_slice)
    }
}

/// Single-pass streaming estimator state. Single writer: pushes take
/// `&mut self`; reads of a finished stream are safe to share.
#[derive(Debug)]
pub struct StreamState {
    motif: TemporalMotif,
    mode: StreamMode,
    cfg: StreamConfig,
    window: ActiveWindow,
    reservoir: Vec<(TemporalEdge, u64)>,
    /// Sum of the stored reservoir numerators.
    counter: u128,
    m_t: u64,
    last_time: Option<Timestamp>,
    dropped: u64,
    skipped_self_loops: u64,
    wedge_tables: Option<WedgeTables>,
    stats: StreamStats,
    last_push_stats: StreamStats,
    max_window_len: usize,
    peak_items: usize,
}

impl StreamState {
    pub fn new(motif: &TemporalMotif, mode: StreamMode, cfg: StreamConfig) -> Result<StreamState> {
        if cfg.r == 0 {
            return Err(Error::InvalidConfig {
                msg: "reservoir capacity r must be >= 1".into(),
            });
        }
        if !(cfg.q > 0.0 && cfg.q <= 1.0) {
            return Err(Error::InvalidConfig {
                msg: format!("q = {} not in (0, 1]", cfg.q),
            });
        }
        let wedge_tables = match mode {
            StreamMode::Ses => None,
            StreamMode::Sews => {
                if motif.class() == MotifClass::Generic {
                    return Err(Error::UnsupportedMotif);
                }
                Some(build_wedge_tables(motif)?)
            }
        };
        Ok(StreamState {
            motif: motif.clone(),
            mode,
            cfg,
            window: ActiveWindow::default(),
            reservoir: Vec::with_capacity(cfg.r.min(1 << 20) as usize),
            counter: 0,
            m_t: 0,
            last_time: None,
            dropped: 0,
            skipped_self_loops: 0,
            wedge_tables,
            stats: StreamStats::default(),
            last_push_stats: StreamStats::default(),
            max_window_len: 0,
            peak_items: 0,
        })
    }

    /// Feeds the next stream edge and returns the updated estimate.
    pub fn push(
        &mut self,
        src: VertexId,
        dst: VertexId,
        time: Timestamp,
    ) -> Result<StreamEstimate> {
        self.last_push_stats = StreamStats::default();
        if src == dst {
            match self.cfg.self_loops {
                SelfLoopPolicy::Reject => {
                    return Err(Error::SelfLoop {
                        line: (self.m_t + self.dropped + self.skipped_self_loops + 1) as usize,
                        vertex: src as u64,
                    })
                }
                SelfLoopPolicy::Skip => {
                    self.skipped_self_loops += 1;
                    return Ok(self.estimate());
                }
            }
        }
        if let Some(last) = self.last_time {
            if time < last {
                match self.cfg.disorder {
                    DisorderPolicy::Error => return Err(Error::OutOfOrder { time, last }),
                    DisorderPolicy::DropWarn => {
                        log::warn!("dropping out-of-order edge {src}->{dst} at {time} < {last}");
                        self.dropped += 1;
                        return Ok(self.estimate());
                    }
                }
            }
        }

        let seq: EdgeSeq = self.m_t;
        self.m_t += 1;
        self.last_time = Some(time);
        let e = TemporalEdge {
            src,
            dst,
            time,
            seq,
        };

        self.window
            .evict_before(time.saturating_sub(self.cfg.delta));
        self.window.push(e);
        self.max_window_len = self.max_window_len.max(self.window.len());

        if (self.reservoir.len() as u64) < self.cfg.r {
            let num = self.local_numerator(&e);
            self.counter += num as u128;
            self.reservoir.push((e, num));
        } else {
            let p_take = self.cfg.r as f64 / self.m_t as f64;
            if accept(self.cfg.seed, &[DOMAIN_RESERVOIR_COIN, seq], p_take) {
                let victim =
                    pick_index(self.cfg.seed, &[DOMAIN_RESERVOIR_VICTIM, seq], self.cfg.r) as usize;
                // Subtract what was stored at insertion time, not a recount:
                // the window has moved on since then.
                self.counter -= self.reservoir[victim].1 as u128;
                let num = self.local_numerator(&e);
                self.counter += num as u128;
                self.reservoir[victim] = (e, num);
            }
        }

        self.peak_items = self.peak_items.max(self.memory_items());
        if seq & 0xff == 0 {
            debug_assert!(
                self.verify_counter(),
                "counter drifted from reservoir contents"
            );
        }
        self.stats.expansions += self.last_push_stats.expansions;
        self.stats.wedge_candidates += self.last_push_stats.wedge_candidates;
        self.stats.closing_searches += self.last_push_stats.closing_searches;
        self.stats.local_counts += self.last_push_stats.local_counts;
        Ok(self.estimate())
    }

    fn local_numerator(&mut self, e: &TemporalEdge) -> u64 {
        self.last_push_stats.local_counts += 1;
        match self.mode {
            StreamMode::Ses => {
                let (n, stats) =
                    count_local_last_stats(&self.window, &self.motif, self.cfg.delta, e);
                self.last_push_stats.expansions += stats.expansions;
                n
            }
            StreamMode::Sews => {
                let tables = self.wedge_tables.as_ref().expect("tables built for sews");
                let mut ws = WedgeStats::default();
                let last = self.motif.l() - 1;
                let n = wedge_numerator(
                    &self.window,
                    &self.motif,
                    tables,
                    self.cfg.delta,
                    e,
                    last,
                    self.cfg.q,
                    self.cfg.seed,
                    |v| self.window.degree(v),
                    &mut ws,
                );
                self.last_push_stats.wedge_candidates += ws.wedge_candidates;
                self.last_push_stats.closing_searches += ws.closing_searches;
                n
            }
        }
    }

    /// Current estimate without pushing.
    pub fn estimate(&self) -> StreamEstimate {
        let q = match self.mode {
            StreamMode::Ses => 1.0,
            StreamMode::Sews => self.cfg.q,
        };
        let raw = self.counter as f64 / q;
        let value = if self.m_t < self.cfg.r {
            raw
        } else {
            (self.m_t as f64 / self.cfg.r as f64) * raw
        };
        StreamEstimate {
            value,
            m_t: self.m_t,
            timestamp: self.last_time.unwrap_or(0),
        }
    }

    pub fn m_t(&self) -> u64 {
        self.m_t
    }

    pub fn mode(&self) -> StreamMode {
        self.mode
    }

    pub fn config(&self) -> &StreamConfig {
        &self.cfg
    }

    pub fn reservoir_len(&self) -> usize {
        self.reservoir.len()
    }

    /// Edges currently held by the reservoir.
    pub fn reservoir_edges(&self) -> impl Iterator<Item = &TemporalEdge> {
        self.reservoir.iter().map(|(e, _)| e)
    }

    /// Raw counter (sum of stored numerators).
    pub fn raw_counter(&self) -> u128 {
        self.counter
    }

    /// Edges dropped by the lenient disorder policy.
    pub fn dropped(&self) -> u64 {
        self.dropped
    }

    /// Self-loops skipped under [`SelfLoopPolicy::Skip`].
    pub fn skipped_self_loops(&self) -> u64 {
        self.skipped_self_loops
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    /// Largest window population seen so far.
    pub fn max_window_len(&self) -> usize {
        self.max_window_len
    }

    /// Edges currently inside the active window, oldest first.
    pub fn window_edges(&self) -> impl Iterator<Item = &TemporalEdge> {
        self.window.ring.as_slice().iter()
    }

    /// Live state entries: window indices plus reservoir slots.
    pub fn memory_items(&self) -> usize {
        self.window.items() + self.reservoir.len()
    }

    /// Largest [`Self::memory_items`] observed.
    pub fn peak_memory_items(&self) -> usize {
        self.peak_items
    }

    pub fn total_stats(&self) -> StreamStats {
        self.stats
    }

    pub fn last_push_stats(&self) -> StreamStats {
        self.last_push_stats
    }

    /// Recomputes the counter from the stored reservoir numerators.
    pub fn verify_counter(&self) -> bool {
        let sum: u128 = self.reservoir.iter().map(|&(_, n)| n as u128).sum();
        sum == self.counter
    }
}

/// Upper bound on the streaming estimator variance after `m_t` edges for a
/// true count `count`.
pub fn stream_variance_bound(
    mode: StreamMode,
    m_t: u64,
    r: u64,
    q: f64,
    count: f64,
) -> Result<f64> {
    if r == 0 {
        return Err(Error::InvalidConfig {
            msg: "r must be >= 1".into(),
        });
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidConfig {
            msg: format!("q = {q} not in (0, 1]"),
        });
    }
    let keep = match mode {
        StreamMode::Ses => r as f64,
        StreamMode::Sews => r as f64 * q,
    };
    let m = m_t as f64;
    if m <= keep {
        return Ok(0.0);
    }
    Ok((m - keep) / keep * count * count)
}
