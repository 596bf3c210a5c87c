//! Sampling estimators over a fully loaded graph.
//!
//! Edge sampling (`es_estimate`) keeps each edge independently with
//! probability `p`, computes its exact local count, and rescales by
//! `1 / (p * l)`. The estimate is unbiased and its variance is at most
//! `(1 - p) / p * C^2` for a true count `C`.
//!
//! Edge-wedge sampling (`ews_estimate`) applies to 3-edge stars and
//! triangles. For a sampled edge mapped to motif position `j`, the two
//! remaining motif edges form a wedge pattern around a center vertex; the
//! estimator enumerates the candidate wedge edges from the center's
//! adjacency, keeps each with probability `q`, and counts the closing edges
//! of each kept wedge with a pair lookup plus two binary searches instead of
//! a second enumeration. Rescaling by `1 / (3 * p * q)` keeps the estimate
//! unbiased, with variance at most `(1 - p*q) / (p*q) * C^2`.
//!
//! All sampling decisions are keyed on `(seed, edge seq)` so results are
//! reproducible and independent of thread schedule, and all accumulation is
//! integral, so a fixed seed gives a bit-identical value.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::exact::{count_local, key_range};
use crate::graph::{TemporalAccess, TemporalGraph};
use crate::motif::{MotifClass, TemporalMotif};
use crate::sampling::{accept, DOMAIN_EDGE, DOMAIN_WEDGE};
use crate::{EdgeKey, EdgeSeq, Error, Result, TemporalEdge, Timestamp, VertexId};

/// Parameters shared by the offline estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    /// Motif duration bound.
    pub delta: u64,
    /// Edge sampling probability, in `(0, 1]`.
    pub p: f64,
    /// Wedge sampling probability, in `(0, 1]` (ignored by plain edge sampling).
    pub q: f64,
    /// Seed for all sampling decisions.
    pub seed: u64,
}

impl EstimatorConfig {
    pub fn new(delta: u64, p: f64, q: f64, seed: u64) -> Self {
        EstimatorConfig { delta, p, q, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::InvalidConfig {
                msg: format!("p = {} not in (0, 1]", self.p),
            });
        }
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(Error::InvalidConfig {
                msg: format!("q = {} not in (0, 1]", self.q),
            });
        }
        Ok(())
    }
}

/// Which estimator a variance bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    EdgeSampling,
    EdgeWedgeSampling,
}

/// Result of one estimator run.
#[derive(Debug, Clone)]
pub struct Estimate {
    pub value: f64,
    pub sampled_edges: u64,
    pub config: EstimatorConfig,
    pub elapsed: Duration,
}

/// One wedge instance: two edges sharing the center vertex. `edge_a` is the
/// temporally earlier of the two; the pattern records each edge's direction
/// relative to the center in temporal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TemporalWedge {
    pub center: VertexId,
    pub edge_a: EdgeSeq,
    pub edge_b: EdgeSeq,
    pub pattern: WedgePattern,
}

/// Direction of the earlier and later wedge edge relative to the center
/// (four possible combinations).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WedgePattern {
    pub first_outward: bool,
    pub second_outward: bool,
}

/// Upper bound on the estimator variance for a true count `count`.
pub fn variance_bound(kind: EstimatorKind, cfg: &EstimatorConfig, count: f64) -> Result<f64> {
    cfg.validate()?;
    let keep = match kind {
        EstimatorKind::EdgeSampling => cfg.p,
        EstimatorKind::EdgeWedgeSampling => cfg.p * cfg.q,
    };
    Ok((1.0 - keep) / keep * count * count)
}

/// Edge probability that makes the estimate an (epsilon, gamma) guarantee:
/// `p = 1 / (1 + gamma * epsilon^2)` bounds the probability of a relative
/// error of `epsilon` or more by `1 / (1 + gamma)` (via Chebyshev).
pub fn suggested_edge_probability(epsilon: f64, gamma: f64) -> Result<f64> {
    let positive = epsilon > 0.0 && gamma > 0.0;
    if !positive {
        return Err(Error::InvalidConfig {
            msg: format!("epsilon = {epsilon}, gamma = {gamma} must be positive"),
        });
    }
    Ok(1.0 / (1.0 + gamma * epsilon * epsilon))
}

#[inline]
pub(crate) fn edge_sampled(seed: u64, e: &TemporalEdge, p: f64) -> bool {
    accept(seed, &[DOMAIN_EDGE, e.seq], p)
}

/// Edge-sampling estimate of the motif count.
pub fn es_estimate(
    g: &TemporalGraph,
    motif: &TemporalMotif,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    let start = Instant::now();
    let l = motif.l();
    let (total, sampled) = g
        .edges()
        .par_iter()
        .map(|e| {
            if !edge_sampled(cfg.seed, e, cfg.p) {
                return (0u128, 0u64);
            }
            let local: u64 = (0..l).map(|j| count_local(g, motif, cfg.delta, e, j)).sum();
            (local as u128, 1u64)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let value = total as f64 / (cfg.p * l as f64);
    Ok(Estimate {
        value,
        sampled_edges: sampled,
        config: *cfg,
        elapsed: start.elapsed(),
    })
}

/// Counters describing wedge-stage work.
#[derive(Debug, Default, Clone, Copy)]
pub struct WedgeStats {
    /// Wedge candidate edges examined around centers.
    pub wedge_candidates: u64,
    /// Closing-edge range counts performed (one hash + two binary searches).
    pub closing_searches: u64,
}

/// Precomputed wedge-pattern choice per anchor position.
#[derive(Debug, Clone)]
pub(crate) enum WedgeTables {
    /// Star: fixed center; `partner[j]` is the second wedge edge for an
    /// anchor at position `j` (the lowest position attached to the other leaf).
    Star { center: u32, partner: [usize; 3] },
    /// Triangle: the center is the anchor endpoint with the smaller degree,
    /// so both choices are precomputed.
    Tri {
        partner_src: [usize; 3],
        partner_dst: [usize; 3],
    },
}

pub(crate) fn build_wedge_tables(motif: &TemporalMotif) -> Result<WedgeTables> {
    let edges = motif.edges();
    match motif.class() {
        MotifClass::Star33 { center } => {
            let leaf = |j: usize| -> u32 {
                if edges[j].src == center {
                    edges[j].dst
                } else {
                    edges[j].src
                }
            };
            let mut partner = [0usize; 3];
            for (j, slot) in partner.iter_mut().enumerate() {
                *slot = (0..3)
                    .find(|&i| i != j && leaf(i) != leaf(j))
                    .ok_or(Error::UnsupportedMotif)?;
            }
            Ok(WedgeTables::Star { center, partner })
        }
        MotifClass::Triangle => {
            let other_edge_at = |j: usize, v: u32| -> Result<usize> {
                (0..3)
                    .find(|&i| i != j && (edges[i].src == v || edges[i].dst == v))
                    .ok_or(Error::UnsupportedMotif)
            };
            let mut partner_src = [0usize; 3];
            let mut partner_dst = [0usize; 3];
            for j in 0..3 {
                partner_src[j] = other_edge_at(j, edges[j].src)?;
                partner_dst[j] = other_edge_at(j, edges[j].dst)?;
            }
            Ok(WedgeTables::Tri {
                partner_src,
                partner_dst,
            })
        }
        MotifClass::Generic => Err(Error::UnsupportedMotif),
    }
}

/// Sum of closing-edge counts over the q-sampled wedges anchored at `e` in
/// motif position `j`. The caller divides by `q` (and the other scale
/// factors) to form the estimate; keeping the numerator integral makes
/// accumulation exact and schedule-independent.
///
/// The argument list is wide on purpose: bundling it into a context struct
/// would force both call sites to thread the same borrows through a type
/// parameter soup for no gain.
#[allow(clippy::too_many_arguments)]
pub(crate) fn wedge_numerator<A, D>(
    access: &A,
    motif: &TemporalMotif,
    tables: &WedgeTables,
    delta: u64,
    e: &TemporalEdge,
    j: usize,
    q: f64,
    seed: u64,
    degree_of: D,
    stats: &mut WedgeStats,
) -> u64
where
    A: TemporalAccess,
    D: Fn(VertexId) -> usize,
{
    let edges = motif.edges();
    let anchor = edges[j];

    // Pick the wedge center and the partner motif edge for this anchor.
    let (center_mv, partner) = match tables {
        WedgeTables::Star { center, partner } => (*center, partner[j]),
        WedgeTables::Tri {
            partner_src,
            partner_dst,
        } => {
            let (du, dv) = (degree_of(e.src), degree_of(e.dst));
            let pick_src = du < dv || (du == dv && e.src < e.dst);
            if pick_src {
                (anchor.src, partner_src[j])
            } else {
                (anchor.dst, partner_dst[j])
            }
        }
    };
    let center: VertexId = if anchor.src == center_mv {
        e.src
    } else {
        e.dst
    };
    let far: VertexId = if center == e.src { e.dst } else { e.src };

    let pedge = edges[partner];
    let partner_outward = pedge.src == center_mv;
    let partner_leaf_mv = if partner_outward {
        pedge.dst
    } else {
        pedge.src
    };
    let anchor_leaf_mv = if anchor.src == center_mv {
        anchor.dst
    } else {
        anchor.src
    };

    let slice = if partner_outward {
        access.out_edges(center)
    } else {
        access.in_edges(center)
    };
    // The wedge edge sits before or after the anchor according to the
    // positions' order, within delta of the anchor's time.
    let (s, t) = if partner < j {
        key_range(
            slice,
            None,
            e.time.saturating_sub(delta),
            Some(e.key()),
            e.time,
        )
    } else {
        key_range(
            slice,
            Some(e.key()),
            e.time,
            None,
            e.time.saturating_add(delta),
        )
    };

    let closing = 3 - partner - j;
    let zedge = edges[closing];
    let mut numerator: u64 = 0;

    for ent in &slice[s..t] {
        stats.wedge_candidates += 1;
        let leaf = ent.other;
        if leaf == far {
            continue;
        }
        if !accept(seed, &[DOMAIN_WEDGE, e.seq, ent.seq], q) {
            continue;
        }

        let (early_key, late_key, early_out, late_out) = if partner < j {
            (ent.key(), e.key(), partner_outward, anchor.src == center_mv)
        } else {
            (e.key(), ent.key(), anchor.src == center_mv, partner_outward)
        };
        let wedge = TemporalWedge {
            center,
            edge_a: early_key.1,
            edge_b: late_key.1,
            pattern: WedgePattern {
                first_outward: early_out,
                second_outward: late_out,
            },
        };
        debug_assert!(wedge.edge_a != wedge.edge_b);

        // All three motif vertices are now mapped; resolve the closing pair.
        let map = |mv: u32| -> VertexId {
            if mv == center_mv {
                center
            } else if mv == anchor_leaf_mv {
                far
            } else {
                debug_assert_eq!(mv, partner_leaf_mv);
                leaf
            }
        };
        let pair = access.pair_edges(map(zedge.src), map(zedge.dst));

        let first = partner.min(j);
        let last = partner.max(j);
        let (lo_key, lo_t, hi_key, hi_t): (Option<EdgeKey>, Timestamp, Option<EdgeKey>, Timestamp) =
            if closing < first {
                (
                    None,
                    late_key.0.saturating_sub(delta),
                    Some(early_key),
                    Timestamp::MAX,
                )
            } else if closing > last {
                (Some(late_key), 0, None, early_key.0.saturating_add(delta))
            } else {
                (Some(early_key), 0, Some(late_key), Timestamp::MAX)
            };
        stats.closing_searches += 1;
        let (cs, ct) = key_range(pair, lo_key, lo_t, hi_key, hi_t);
        numerator += (ct - cs) as u64;
    }
    numerator
}

/// Edge-wedge-sampling estimate; requires a 3-edge star or triangle motif.
pub fn ews_estimate(
    g: &TemporalGraph,
    motif: &TemporalMotif,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    let tables = build_wedge_tables(motif)?;
    let start = Instant::now();
    let (total, sampled) = g
        .edges()
        .par_iter()
        .map(|e| {
            if !edge_sampled(cfg.seed, e, cfg.p) {
                return (0u128, 0u64);
            }
            let mut stats = WedgeStats::default();
            let local: u64 = (0..3)
                .map(|j| {
                    wedge_numerator(
                        g,
                        motif,
                        &tables,
                        cfg.delta,
                        e,
                        j,
                        cfg.q,
                        cfg.seed,
                        |v| g.degree(v),
                        &mut stats,
                    )
                })
                .sum();
            (local as u128, 1u64)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let value = total as f64 / (3.0 * cfg.p * cfg.q);
    Ok(Estimate {
        value,
        sampled_edges: sampled,
        config: *cfg,
        elapsed: start.elapsed(),
    })
}
