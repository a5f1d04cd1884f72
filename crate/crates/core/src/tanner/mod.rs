//! Bipartite Tanner graph of a binary parity-check matrix.
//!
//! Variable nodes (VNs, columns of H) and check nodes (CNs, rows of H) are
//! indexed from zero inside the library. Every persisted or printed form
//! (alist, JSON, CSV) uses one-based indices.

mod alist;

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use alist::{read_alist, write_alist};

/// Length of the shortest cycle of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Girth::Finite(_))
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

/// A set of VN indices, kept sorted and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VnSet(Vec<usize>);

impl VnSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VnSet(v)
    }

    pub fn empty() -> Self {
        VnSet(Vec::new())
    }

    /// Builds a set from one-based indices, as found in files.
    pub fn from_one_based(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v = Vec::new();
        for i in members {
            if i == 0 {
                return invalid("VN indices are one-based; found 0");
            }
            v.push(i - 1);
        }
        Ok(VnSet::new(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, vn: usize) -> bool {
        self.0.binary_search(&vn).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }

    pub fn is_subset(&self, other: &VnSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    /// True when the two sets share at least one VN.
    pub fn intersects(&self, other: &VnSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for v in self.iter() {
            m[v] = true;
        }
        m
    }

    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => invalid(format!("VN {} out of range 1..={n}", v + 1)),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for VnSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VnSet::new(iter)
    }
}

/// Tanner graph with `n` VNs and `m` CNs. Adjacency lists are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n: usize,
    m: usize,
    d_v: usize,
    vn_adj: Vec<Vec<usize>>,
    cn_adj: Vec<Vec<usize>>,
}

impl TannerGraph {
    /// Empty graph. `d_v` is the target VN degree of a construction.
    pub fn new(n: usize, m: usize, d_v: usize) -> Self {
        TannerGraph {
            n,
            m,
            d_v,
            vn_adj: vec![Vec::new(); n],
            cn_adj: vec![Vec::new(); m],
        }
    }

    /// Builds a graph from `(vn, cn)` pairs. The target degree is taken to be
    /// the largest VN degree.
    pub fn from_edges(n: usize, m: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = TannerGraph::new(n, m, 0);
        for (v, c) in edges {
            g.add_edge(v, c)?;
        }
        g.d_v = g.max_vn_degree();
        Ok(g)
    }

    /// Builds a graph from CN rows, each listing its VN neighbors.
    pub fn from_rows(n: usize, rows: &[&[usize]]) -> Result<Self> {
        let edges = rows
            .iter()
            .enumerate()
            .flat_map(|(c, row)| row.iter().map(move |&v| (v, c)));
        TannerGraph::from_edges(n, rows.len(), edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d_v(&self) -> usize {
        self.d_v
    }

    pub(crate) fn set_d_v(&mut self, d_v: usize) {
        self.d_v = d_v;
    }

    pub fn vn_neighbors(&self, v: usize) -> &[usize] {
        &self.vn_adj[v]
    }

    pub fn cn_neighbors(&self, c: usize) -> &[usize] {
        &self.cn_adj[c]
    }

    pub fn vn_degree(&self, v: usize) -> usize {
        self.vn_adj[v].len()
    }

    pub fn cn_degree(&self, c: usize) -> usize {
        self.cn_adj[c].len()
    }

    pub fn max_vn_degree(&self) -> usize {
        self.vn_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_cn_degree(&self) -> usize {
        self.cn_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn num_edges(&self) -> usize {
        self.vn_adj.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, v: usize, c: usize) -> bool {
        self.vn_adj[v].binary_search(&c).is_ok()
    }

    /// All edges as `(vn, cn)` pairs in VN-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vn_adj
            .iter()
            .enumerate()
            .flat_map(|(v, cs)| cs.iter().map(move |&c| (v, c)))
    }

    pub fn add_edge(&mut self, v: usize, c: usize) -> Result<()> {
        if v >= self.n || c >= self.m {
            return invalid(format!("edge ({}, {}) outside a {}x{} graph", v + 1, c + 1, self.n, self.m));
        }
        match self.vn_adj[v].binary_search(&c) {
            Ok(_) => Err(Error::DuplicateEdge { vn: v + 1, cn: c + 1 }),
            Err(pos) => {
                self.vn_adj[v].insert(pos, c);
                let pos = self.cn_adj[c].binary_search(&v).unwrap_err();
                self.cn_adj[c].insert(pos, v);
                Ok(())
            }
        }
    }

    /// Copy of the graph with VN `v` renamed `vn_perm[v]` and CN `c` renamed
    /// `cn_perm[c]`.
    pub fn relabeled(&self, vn_perm: &[usize], cn_perm: &[usize]) -> TannerGraph {
        let mut g = TannerGraph::new(self.n, self.m, self.d_v);
        for (v, c) in self.edges() {
            g.add_edge(vn_perm[v], cn_perm[c]).expect("permutation keeps edges distinct");
        }
        g
    }

    pub fn girth(&self) -> Girth {
        girth(self)
    }
}

/// Shortest cycle length of the graph, or `Infinite` when it is a forest.
pub fn girth(graph: &TannerGraph) -> Girth {
    match shortest_cycle_below(graph, None, usize::MAX) {
        Some(g) => Girth::Finite(g),
        None => Girth::Infinite,
    }
}

/// Girth of the subgraph induced by the VNs in `vns` and their CNs.
pub fn induced_girth(graph: &TannerGraph, vns: &VnSet) -> Girth {
    let mut removed = vec![true; graph.n()];
    for v in vns.iter() {
        removed[v] = false;
    }
    match shortest_cycle_below(graph, Some(&removed), usize::MAX) {
        Some(g) => Girth::Finite(g),
        None => Girth::Infinite,
    }
}

/// True iff the graph with the VNs of `removed` purged has no cycle of length
/// below `g`.
pub fn avoids_short_cycles(graph: &TannerGraph, removed: &VnSet, g: usize) -> Result<bool> {
    if g < 4 || g % 2 != 0 {
        return invalid(format!("cycle threshold must be even and at least 4, got {g}"));
    }
    removed.check_within(graph.n())?;
    let mask = if removed.is_empty() { None } else { Some(removed.mask(graph.n())) };
    Ok(shortest_cycle_below(graph, mask.as_deref(), g).is_none())
}

/// Shortest cycle of length `< limit` in the graph minus the `removed` VNs,
/// found by truncated BFS from every VN.
pub(crate) fn shortest_cycle_below(graph: &TannerGraph, removed: Option<&[bool]>, limit: usize) -> Option<usize> {
    let n = graph.n();
    let total = n + graph.m();
    let is_removed = |v: usize| removed.is_some_and(|r| r[v]);
    let mut best = limit;
    let mut dist = vec![usize::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut touched = Vec::with_capacity(total);
    let mut queue = VecDeque::new();

    for root in 0..n {
        if is_removed(root) || graph.vn_degree(root) < 2 {
            continue;
        }
        for &u in &touched {
            dist[u] = usize::MAX;
            parent[u] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);

        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] >= best {
                break;
            }
            let (du, pu) = (dist[u], parent[u]);
            let mut visit = |w: usize| {
                if w == pu {
                    return;
                }
                if dist[w] == usize::MAX {
                    dist[w] = du + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    best = best.min(du + dist[w] + 1);
                }
            };
            if u < n {
                for &c in graph.vn_neighbors(u) {
                    visit(n + c);
                }
            } else {
                for &v in graph.cn_neighbors(u - n) {
                    if !is_removed(v) {
                        visit(v);
                    }
                }
            }
        }
    }
    (best < limit).then_some(best)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// v1-c1-v2-c2-v3-c3-v1.
    pub fn six_ring() -> TannerGraph {
        TannerGraph::from_edges(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]).unwrap()
    }

    /// Two VNs sharing two CNs.
    pub fn four_cycle() -> TannerGraph {
        TannerGraph::from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap()
    }

    /// H rows {v1,v2}, {v2,v3}.
    pub fn path_code() -> TannerGraph {
        TannerGraph::from_rows(3, &[&[0, 1], &[1, 2]]).unwrap()
    }

    pub fn complete(n: usize, m: usize) -> TannerGraph {
        TannerGraph::from_edges(n, m, (0..n).flat_map(|v| (0..m).map(move |c| (v, c)))).unwrap()
    }
}
