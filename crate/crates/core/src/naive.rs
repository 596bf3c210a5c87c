//! Brute-force instance enumeration, used as a correctness oracle.
//!
//! Walks the time-sorted edge list directly: for each choice of first edge,
//! later edges are drawn in index order from the at-most-`delta` span that
//! follows, and a tuple is kept when its endpoint pattern matches the motif
//! under an injective vertex map. No adjacency indices, matching orders, or
//! temporal pruning bounds are involved, so the result is an independent
//! check on the backtracking counter. Guarded by size caps because the cost
//! grows with `m^l`.

use crate::exact::MotifInstance;
use crate::graph::TemporalGraph;
use crate::motif::TemporalMotif;
use crate::{Error, Result, TemporalEdge, VertexId};

/// Size caps for the brute-force enumeration.
#[derive(Debug, Clone, Copy)]
pub struct NaiveLimits {
    pub max_edges: usize,
    pub max_motif_edges: usize,
}

impl Default for NaiveLimits {
    fn default() -> Self {
        NaiveLimits {
            max_edges: 10_000,
            max_motif_edges: 5,
        }
    }
}

/// Maps motif vertices onto the chosen edges' endpoints; `None` if the
/// assignment is inconsistent or not injective.
fn vertex_map(motif: &TemporalMotif, chosen: &[&TemporalEdge]) -> Option<Vec<Option<VertexId>>> {
    let mut assigned: Vec<Option<VertexId>> = vec![None; motif.k()];
    for (me, ge) in motif.edges().iter().zip(chosen) {
        for (mv, gv) in [(me.src, ge.src), (me.dst, ge.dst)] {
            match assigned[mv as usize] {
                None => {
                    if assigned.contains(&Some(gv)) {
                        return None;
                    }
                    assigned[mv as usize] = Some(gv);
                }
                Some(prev) if prev == gv => {}
                Some(_) => return None,
            }
        }
    }
    Some(assigned)
}

/// Enumerates every motif instance within `delta`.
pub fn enumerate_instances(
    g: &TemporalGraph,
    motif: &TemporalMotif,
    delta: u64,
    limits: &NaiveLimits,
) -> Result<Vec<MotifInstance>> {
    if g.m() > limits.max_edges || motif.l() > limits.max_motif_edges {
        return Err(Error::EnumerationGuard {
            m: g.m(),
            max_edges: limits.max_edges,
            l: motif.l(),
            max_motif_edges: limits.max_motif_edges,
        });
    }
    let edges = g.edges();
    let l = motif.l();
    let mut out = Vec::new();
    let mut chosen: Vec<&TemporalEdge> = Vec::with_capacity(l);

    fn recurse<'a>(
        edges: &'a [TemporalEdge],
        motif: &TemporalMotif,
        delta: u64,
        from: usize,
        deadline: u64,
        chosen: &mut Vec<&'a TemporalEdge>,
        out: &mut Vec<MotifInstance>,
    ) {
        if chosen.len() == motif.l() {
            if vertex_map(motif, chosen).is_some() {
                out.push(MotifInstance {
                    edge_seqs: chosen.iter().map(|e| e.seq).collect(),
                    times: chosen.iter().map(|e| e.time).collect(),
                });
            }
            return;
        }
        for i in from..edges.len() {
            let e = &edges[i];
            if !chosen.is_empty() && e.time > deadline {
                break;
            }
            chosen.push(e);
            // Prefix consistency is the same map check on fewer edges; it
            // only skips tuples whose completions all fail the final check.
            if vertex_map_prefix_ok(motif, chosen) {
                let next_deadline = if chosen.len() == 1 {
                    e.time.saturating_add(delta)
                } else {
                    deadline
                };
                recurse(edges, motif, delta, i + 1, next_deadline, chosen, out);
            }
            chosen.pop();
        }
    }

    fn vertex_map_prefix_ok(motif: &TemporalMotif, chosen: &[&TemporalEdge]) -> bool {
        let mut assigned: Vec<Option<VertexId>> = vec![None; motif.k()];
        for (me, ge) in motif.edges().iter().zip(chosen) {
            for (mv, gv) in [(me.src, ge.src), (me.dst, ge.dst)] {
                match assigned[mv as usize] {
                    None => {
                        if assigned.contains(&Some(gv)) {
                            return false;
                        }
                        assigned[mv as usize] = Some(gv);
                    }
                    Some(prev) if prev == gv => {}
                    Some(_) => return false,
                }
            }
        }
        true
    }

    recurse(edges, motif, delta, 0, 0, &mut chosen, &mut out);
    Ok(out)
}

/// Number of instances found by [`enumerate_instances`].
pub fn naive_count(
    g: &TemporalGraph,
    motif: &TemporalMotif,
    delta: u64,
    limits: &NaiveLimits,
) -> Result<u64> {
    Ok(enumerate_instances(g, motif, delta, limits)?.len() as u64)
}
