//! Temporal motif patterns and matching orders.
//!
//! A motif has `k` vertices and `l` directed edges given in the order their
//! graph counterparts must occur in time. The text format is:
//!
//! ```text
//! <k> <l>
//! <src> <dst>   (l lines, vertex ids in 0..k)
//! ```
//!
//! with `#`/`%` comments and blank lines ignored. The skeleton (edges with
//! order and direction forgotten) must be connected, edges must not be
//! self-loops, and every vertex must appear in at least one edge.

use crate::error::Error;
use crate::Result;

/// Motif vertex id, `0..k`.
pub type MotifVertexId = u32;

/// One motif edge (endpoints are motif vertex ids).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MotifEdge {
    pub src: MotifVertexId,
    pub dst: MotifVertexId,
}

impl MotifEdge {
    fn touches(&self, v: MotifVertexId) -> bool {
        self.src == v || self.dst == v
    }

    fn shares_vertex(&self, other: &MotifEdge) -> bool {
        self.touches(other.src) || self.touches(other.dst)
    }
}

/// Structural class of a motif, used to pick specialized estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotifClass {
    /// Three edges all incident to one center vertex, three vertices total,
    /// skeleton not a closed triangle.
    Star33 { center: MotifVertexId },
    /// Three edges whose skeleton is a closed triangle on three vertices.
    Triangle,
    /// Anything else.
    Generic,
}

/// The edge order used by the backtracking search: `positions[0]` is the
/// motif edge matched first (the anchor), and each later edge shares a
/// vertex with an earlier one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingOrder {
    pub start: usize,
    pub positions: Vec<usize>,
}

/// How the next edge of a matching order is chosen among those adjacent to
/// the already-matched part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderStrategy {
    /// Prefer the first or last unmatched edge in the order (tightest
    /// temporal bounds); tie-break toward the edge adjacent to the most
    /// recently matched one, then the smaller index.
    BoundaryFirst,
    /// Plain index order among adjacent unmatched edges.
    IndexOrder,
}

/// A temporal motif: `k` vertices and `l` ordered directed edges, with the
/// structural class and matching orders precomputed.
#[derive(Debug, Clone)]
pub struct TemporalMotif {
    k: usize,
    edges: Vec<MotifEdge>,
    class: MotifClass,
    orders: Vec<MatchingOrder>,
}

impl TemporalMotif {
    /// Builds a motif from its edge list, validating the invariants.
    pub fn new(k: usize, edges: Vec<MotifEdge>) -> Result<TemporalMotif> {
        if k == 0 || k > u32::MAX as usize {
            return Err(Error::MalformedMotif {
                msg: format!("invalid vertex count {k}"),
            });
        }
        if edges.is_empty() {
            return Err(Error::MalformedMotif {
                msg: "motif has no edges".into(),
            });
        }
        for (i, e) in edges.iter().enumerate() {
            for &v in &[e.src, e.dst] {
                if v as usize >= k {
                    return Err(Error::MotifVertexOutOfRange {
                        edge: i + 1,
                        vertex: v,
                        k: k as u32,
                    });
                }
            }
            if e.src == e.dst {
                return Err(Error::MotifSelfLoop {
                    edge: i + 1,
                    vertex: e.src,
                });
            }
        }
        let mut seen = vec![false; k];
        for e in &edges {
            seen[e.src as usize] = true;
            seen[e.dst as usize] = true;
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::MotifIsolatedVertex { vertex: v as u32 });
        }
        if !skeleton_connected(k, &edges) {
            return Err(Error::MotifDisconnected);
        }
        let class = classify(k, &edges);
        let orders = (0..edges.len())
            .map(|start| build_order(&edges, start, OrderStrategy::BoundaryFirst))
            .collect();
        Ok(TemporalMotif {
            k,
            edges,
            class,
            orders,
        })
    }

    /// Parses the text format described in the module docs.
    pub fn parse(text: &str) -> Result<TemporalMotif> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with('%'));
        let header = lines.next().ok_or_else(|| Error::MalformedMotif {
            msg: "empty motif spec".into(),
        })?;
        let mut it = header.split_whitespace();
        let parse_num = |tok: Option<&str>, what: &str| -> Result<usize> {
            tok.ok_or_else(|| Error::MalformedMotif {
                msg: format!("missing {what}"),
            })?
            .parse::<usize>()
            .map_err(|_| Error::MalformedMotif {
                msg: format!("invalid {what}"),
            })
        };
        let k = parse_num(it.next(), "vertex count")?;
        let l = parse_num(it.next(), "edge count")?;
        if it.next().is_some() {
            return Err(Error::MalformedMotif {
                msg: "extra fields in header".into(),
            });
        }
        let mut edges = Vec::with_capacity(l);
        for line in lines {
            let mut it = line.split_whitespace();
            let src = parse_num(it.next(), "edge source")? as u32;
            let dst = parse_num(it.next(), "edge destination")? as u32;
            if it.next().is_some() {
                return Err(Error::MalformedMotif {
                    msg: format!("extra fields in edge line {:?}", line),
                });
            }
            edges.push(MotifEdge { src, dst });
        }
        if edges.len() != l {
            return Err(Error::MotifEdgeCountMismatch {
                l,
                found: edges.len(),
            });
        }
        TemporalMotif::new(k, edges)
    }

    /// Number of motif vertices.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of motif edges.
    pub fn l(&self) -> usize {
        self.edges.len()
    }

    /// Edges in prescribed temporal order.
    pub fn edges(&self) -> &[MotifEdge] {
        &self.edges
    }

    /// Structural class (computed at construction).
    pub fn class(&self) -> MotifClass {
        self.class
    }

    /// One matching order per motif edge; `orders()[j]` anchors at edge `j`.
    pub fn matching_orders(&self) -> &[MatchingOrder] {
        &self.orders
    }

    /// Rebuilds the matching orders under a given selection strategy.
    pub fn build_matching_orders(&self, strategy: OrderStrategy) -> Vec<MatchingOrder> {
        (0..self.edges.len())
            .map(|start| build_order(&self.edges, start, strategy))
            .collect()
    }
}

fn skeleton_connected(k: usize, edges: &[MotifEdge]) -> bool {
    // Union-find over the k motif vertices.
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in edges {
        let a = find(&mut parent, e.src as usize);
        let b = find(&mut parent, e.dst as usize);
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    (0..k).all(|v| find(&mut parent, v) == root)
}

fn classify(k: usize, edges: &[MotifEdge]) -> MotifClass {
    if k != 3 || edges.len() != 3 {
        return MotifClass::Generic;
    }
    let mut pairs: Vec<(u32, u32)> = edges
        .iter()
        .map(|e| (e.src.min(e.dst), e.src.max(e.dst)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    match pairs.len() {
        // All three undirected pairs on three vertices: a closed triangle.
        3 => MotifClass::Triangle,
        // Two pairs sharing one vertex: a star centered on the shared vertex.
        2 => {
            let (a, b) = pairs[0];
            let (c, d) = pairs[1];
            let center = if a == c || a == d { a } else { b };
            debug_assert!(edges.iter().all(|e| e.touches(center)));
            MotifClass::Star33 { center }
        }
        _ => MotifClass::Generic,
    }
}

fn build_order(edges: &[MotifEdge], start: usize, strategy: OrderStrategy) -> MatchingOrder {
    let l = edges.len();
    let mut positions = Vec::with_capacity(l);
    positions.push(start);
    let mut matched = vec![false; l];
    matched[start] = true;
    let touched = |idx: usize, matched: &[bool]| -> bool {
        // Adjacent to the matched part: shares a vertex with a matched edge.
        matched
            .iter()
            .enumerate()
            .any(|(w, &is)| is && edges[w].shares_vertex(&edges[idx]))
    };
    while positions.len() < l {
        let eligible: Vec<usize> = (0..l)
            .filter(|&i| !matched[i] && touched(i, &matched))
            .collect();
        debug_assert!(
            !eligible.is_empty(),
            "connected motif always has an adjacent edge"
        );
        let next = match strategy {
            OrderStrategy::IndexOrder => eligible[0],
            OrderStrategy::BoundaryFirst => {
                let min_un = (0..l).find(|&i| !matched[i]).unwrap();
                let max_un = (0..l).rev().find(|&i| !matched[i]).unwrap();
                let min_ok = eligible.contains(&min_un);
                let max_ok = eligible.contains(&max_un);
                match (min_ok, max_ok) {
                    (true, false) => min_un,
                    (false, true) => max_un,
                    (true, true) if min_un == max_un => min_un,
                    (true, true) => {
                        let last = *positions.last().unwrap();
                        let near_min = edges[min_un].shares_vertex(&edges[last]);
                        let near_max = edges[max_un].shares_vertex(&edges[last]);
                        match (near_min, near_max) {
                            (false, true) => max_un,
                            _ => min_un,
                        }
                    }
                    (false, false) => eligible[0],
                }
            }
        };
        matched[next] = true;
        positions.push(next);
    }
    MatchingOrder { start, positions }
}
