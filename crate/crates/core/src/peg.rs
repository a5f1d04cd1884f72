//! Progressive edge growth.
//!
//! The graph is grown one edge at a time, VN by VN. The first edge of a VN
//! goes to a least-loaded CN; every later edge goes to a CN that is as far as
//! possible from the VN in the current graph, so the cycle it closes (if any)
//! is as long as possible.

use rand::Rng;

use crate::error::{invalid, Result};
use crate::rng::{self, StageRng, Stream};
use crate::tanner::TannerGraph;

/// Whether joining the queried VN to a candidate closes a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    /// Some CNs are unreachable from the VN; joining any of them closes no cycle.
    Acyclic,
    /// Every CN is reachable; joining any candidate closes cycles whose shortest
    /// length is `length`.
    Cycle { length: usize },
}

/// Candidate CNs for the next edge of a VN.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateResult {
    /// Candidate CNs, ascending. Never empty and never adjacent to the VN.
    pub candidates: Vec<usize>,
    pub closure: Closure,
}

impl CandidateResult {
    pub fn creates_cycle(&self) -> bool {
        matches!(self.closure, Closure::Cycle { .. })
    }

    pub fn cycle_length(&self) -> Option<usize> {
        match self.closure {
            Closure::Cycle { length } => Some(length),
            Closure::Acyclic => None,
        }
    }
}

pub(crate) fn pick<T: Copy>(items: &[T], rng: &mut StageRng) -> T {
    if items.len() == 1 {
        items[0]
    } else {
        items[rng.gen_range(0..items.len())]
    }
}

fn min_degree_among(graph: &TannerGraph, cns: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut best = usize::MAX;
    let mut ties = Vec::new();
    for c in cns {
        let d = graph.cn_degree(c);
        if d < best {
            best = d;
            ties.clear();
        }
        if d == best {
            ties.push(c);
        }
    }
    ties
}

/// CN of minimum current degree over all CNs, ties broken uniformly.
pub fn first_cn_select(graph: &TannerGraph, rng: &mut StageRng) -> usize {
    let ties = min_degree_among(graph, 0..graph.m());
    pick(&ties, rng)
}

/// CN of minimum current degree within `candidates`, ties broken uniformly.
pub fn min_degree_select(graph: &TannerGraph, candidates: &[usize], rng: &mut StageRng) -> Result<usize> {
    if candidates.is_empty() {
        return invalid("candidate set is empty");
    }
    let ties = min_degree_among(graph, candidates.iter().copied());
    Ok(pick(&ties, rng))
}

/// Expands the BFS tree rooted at `vn` level by level over CNs.
///
/// If the reachable CN set stops growing before covering every CN, the
/// unreachable CNs are returned as acyclic candidates. Otherwise the CNs first
/// reached at the deepest level are returned; a CN at distance `d` edges from
/// `vn` closes a cycle of length `d + 1`.
pub fn peg_candidates(graph: &TannerGraph, vn: usize) -> Result<CandidateResult> {
    if vn >= graph.n() {
        return invalid(format!("VN {} out of range", vn + 1));
    }
    if graph.vn_degree(vn) == 0 {
        return invalid(format!("VN {} has no edges yet; use first CN selection", vn + 1));
    }
    let m = graph.m();
    let mut cn_seen = vec![false; m];
    let mut vn_seen = vec![false; graph.n()];
    vn_seen[vn] = true;
    let mut frontier: Vec<usize> = graph.vn_neighbors(vn).to_vec();
    for &c in &frontier {
        cn_seen[c] = true;
    }
    let mut reached = frontier.len();
    if reached == m {
        return invalid(format!("VN {} is already adjacent to every CN", vn + 1));
    }
    // CNs in `frontier` sit at distance 2 * level + 1 from `vn`.
    let mut level = 0usize;
    loop {
        let mut next = Vec::new();
        for &c in &frontier {
            for &v in graph.cn_neighbors(c) {
                if vn_seen[v] {
                    continue;
                }
                vn_seen[v] = true;
                for &c2 in graph.vn_neighbors(v) {
                    if !cn_seen[c2] {
                        cn_seen[c2] = true;
                        next.push(c2);
                    }
                }
            }
        }
        level += 1;
        if next.is_empty() {
            let candidates = (0..m).filter(|&c| !cn_seen[c]).collect();
            return Ok(CandidateResult {
                candidates,
                closure: Closure::Acyclic,
            });
        }
        reached += next.len();
        if reached == m {
            next.sort_unstable();
            return Ok(CandidateResult {
                candidates: next,
                closure: Closure::Cycle { length: 2 * level + 2 },
            });
        }
        frontier = next;
        debug_assert!(level <= 2 * m);
    }
}

pub(crate) fn check_params(n: usize, m: usize, d_v: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return invalid("n and m must be positive");
    }
    if d_v < 2 {
        return invalid(format!("VN degree must be at least 2, got {d_v}"));
    }
    if d_v > m {
        return invalid(format!("VN degree {d_v} exceeds the number of CNs {m}"));
    }
    Ok(())
}

/// Plain PEG construction of an `n`-VN, `m`-CN graph with VN degree `d_v`.
pub fn build_peg(n: usize, m: usize, d_v: usize, seed: u64) -> Result<TannerGraph> {
    check_params(n, m, d_v)?;
    let mut rng = rng::stream(seed, Stream::Construction);
    let mut graph = TannerGraph::new(n, m, d_v);
    for v in 0..n {
        for k in 0..d_v {
            let c = if k == 0 {
                first_cn_select(&graph, &mut rng)
            } else {
                let found = peg_candidates(&graph, v)?;
                min_degree_select(&graph, &found.candidates, &mut rng)?
            };
            graph.add_edge(v, c)?;
        }
    }
    Ok(graph)
}
