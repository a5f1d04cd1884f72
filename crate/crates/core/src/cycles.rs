//! Exact enumeration of short cycles and the VN-to-cycle distributions.
//!
//! Each cycle is rooted at its lowest-indexed VN and walked in the direction
//! where the CN leaving the root is smaller than the CN returning to it, so
//! every cycle is produced exactly once.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::tanner::{TannerGraph, VnSet};

/// Longest cycle length enumerated without an explicit override.
pub const DEFAULT_MAX_CYCLE_LEN: usize = 10;

/// Walks every simple cycle of length `<= max_len` rooted at `root`.
struct CycleWalker<'a> {
    graph: &'a TannerGraph,
    removed: Option<&'a [bool]>,
    max_len: usize,
    dist: Vec<usize>,
    on_path: Vec<bool>,
    vns: Vec<usize>,
}

impl<'a> CycleWalker<'a> {
    fn new(graph: &'a TannerGraph, removed: Option<&'a [bool]>, max_len: usize) -> Self {
        let total = graph.n() + graph.m();
        CycleWalker {
            graph,
            removed,
            max_len,
            dist: vec![usize::MAX; total],
            on_path: vec![false; total],
            vns: Vec::with_capacity(max_len / 2),
        }
    }

    fn allowed_vn(&self, root: usize, v: usize) -> bool {
        v > root && !self.removed.is_some_and(|r| r[v])
    }

    /// BFS distances from `root` over the allowed part of the graph, truncated
    /// at half the length cap.
    fn distances(&mut self, root: usize) {
        let n = self.graph.n();
        self.dist.fill(usize::MAX);
        self.dist[root] = 0;
        let mut frontier = vec![root];
        let half = self.max_len / 2;
        let mut d = 0;
        while !frontier.is_empty() && d < half {
            d += 1;
            let mut next = Vec::new();
            for &u in &frontier {
                if u < n {
                    for &c in self.graph.vn_neighbors(u) {
                        if self.dist[n + c] == usize::MAX {
                            self.dist[n + c] = d;
                            next.push(n + c);
                        }
                    }
                } else {
                    for &v in self.graph.cn_neighbors(u - n) {
                        if self.allowed_vn(root, v) && self.dist[v] == usize::MAX {
                            self.dist[v] = d;
                            next.push(v);
                        }
                    }
                }
            }
            frontier = next;
        }
    }

    fn walk(&mut self, root: usize, visit: &mut impl FnMut(usize, &[usize])) {
        if self.removed.is_some_and(|r| r[root]) || self.graph.vn_degree(root) < 2 {
            return;
        }
        self.distances(root);
        let n = self.graph.n();
        self.on_path[root] = true;
        self.vns.clear();
        self.vns.push(root);
        for &c in self.graph.vn_neighbors(root) {
            self.on_path[n + c] = true;
            self.from_cn(root, c, c, 1, visit);
            self.on_path[n + c] = false;
        }
        self.on_path[root] = false;
    }

    fn from_cn(&mut self, root: usize, first: usize, c: usize, depth: usize, visit: &mut impl FnMut(usize, &[usize])) {
        let n = self.graph.n();
        if depth >= 3 && c > first && self.graph.has_edge(root, c) {
            visit(depth + 1, &self.vns);
        }
        // the next VN and at least one more CN are still needed to close
        if depth + 3 > self.max_len {
            return;
        }
        let graph = self.graph;
        for &v in graph.cn_neighbors(c) {
            if !self.allowed_vn(root, v) || self.on_path[v] {
                continue;
            }
            if (depth + 1).saturating_add(self.dist[v]) > self.max_len {
                continue;
            }
            self.on_path[v] = true;
            self.vns.push(v);
            for &c2 in graph.vn_neighbors(v) {
                if self.on_path[n + c2] || c2 == c {
                    continue;
                }
                if (depth + 2).saturating_add(self.dist[n + c2]) > self.max_len {
                    continue;
                }
                self.on_path[n + c2] = true;
                self.from_cn(root, first, c2, depth + 2, visit);
                self.on_path[n + c2] = false;
            }
            self.vns.pop();
            self.on_path[v] = false;
        }
    }
}

fn check_len(g_max: usize, allow_long: bool) -> Result<()> {
    if g_max < 4 || g_max % 2 != 0 {
        return invalid(format!("cycle length bound must be even and at least 4, got {g_max}"));
    }
    if g_max > DEFAULT_MAX_CYCLE_LEN && !allow_long {
        return invalid(format!(
            "enumerating cycles longer than {DEFAULT_MAX_CYCLE_LEN} needs an explicit override (requested {g_max})"
        ));
    }
    Ok(())
}

/// Per-length cycle totals and per-VN touch counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCensus {
    n: usize,
    g_max: usize,
    totals: Vec<u64>,
    touches: Vec<Vec<u64>>,
}

impl CycleCensus {
    fn empty(n: usize, g_max: usize) -> Self {
        let t = (g_max - 2) / 2;
        CycleCensus {
            n,
            g_max,
            totals: vec![0; t],
            touches: vec![vec![0; n]; t],
        }
    }

    fn slot(&self, g: usize) -> Result<usize> {
        if g < 4 || g % 2 != 0 || g > self.g_max {
            return Err(Error::Untracked(format!("cycle length {g}")));
        }
        Ok((g - 4) / 2)
    }

    fn merge(mut self, other: CycleCensus) -> CycleCensus {
        for (a, b) in self.totals.iter_mut().zip(&other.totals) {
            *a += b;
        }
        for (row, orow) in self.touches.iter_mut().zip(&other.touches) {
            for (a, b) in row.iter_mut().zip(orow) {
                *a += b;
            }
        }
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g_max(&self) -> usize {
        self.g_max
    }

    /// Tracked lengths `4, 6, ..., g_max`.
    pub fn lengths(&self) -> impl Iterator<Item = usize> {
        (4..=self.g_max).step_by(2)
    }

    pub fn total(&self, g: usize) -> Result<u64> {
        Ok(self.totals[self.slot(g)?])
    }

    /// Number of `g`-cycles each VN touches.
    pub fn touches(&self, g: usize) -> Result<&[u64]> {
        Ok(&self.touches[self.slot(g)?])
    }

    /// Fraction of `g`-cycles touched by each VN; all zero when there are none.
    /// The entries sum to `g / 2` whenever `g`-cycles exist.
    pub fn zeta(&self, g: usize) -> Result<Vec<f64>> {
        let s = self.slot(g)?;
        let total = self.totals[s];
        Ok(if total == 0 {
            vec![0.0; self.n]
        } else {
            self.touches[s].iter().map(|&t| t as f64 / total as f64).collect()
        })
    }

    /// VNs by decreasing `zeta^g`, ties by index.
    pub fn order_by(&self, g: usize) -> Result<Vec<usize>> {
        let touches = self.touches(g)?;
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| touches[b].cmp(&touches[a]).then(a.cmp(&b)));
        Ok(order)
    }

    /// CSV with one row per VN (one-based), sorted by decreasing `zeta^6`
    /// when 6-cycles are tracked, and one `zeta<g>` column per tracked length.
    pub fn to_csv(&self) -> String {
        let lengths: Vec<usize> = self.lengths().collect();
        let order = self.order_by(6).unwrap_or_else(|_| (0..self.n).collect());
        let zetas: Vec<Vec<f64>> = lengths.iter().map(|&g| self.zeta(g).expect("tracked")).collect();
        let mut out = String::from("vn");
        for g in &lengths {
            let _ = write!(out, ",zeta{g}");
        }
        out.push('\n');
        for v in order {
            let _ = write!(out, "{}", v + 1);
            for z in &zetas {
                let _ = write!(out, ",{}", z[v]);
            }
            out.push('\n');
        }
        out
    }
}

/// Counts every simple cycle of length `<= g_max` with per-VN touch counts.
/// Lengths above 10 are refused; see [`enumerate_cycles_unbounded`].
pub fn enumerate_cycles(graph: &TannerGraph, g_max: usize) -> Result<CycleCensus> {
    check_len(g_max, false)?;
    Ok(census(graph, g_max))
}

/// Like [`enumerate_cycles`] without the length cap. Cost grows quickly with `g_max`.
pub fn enumerate_cycles_unbounded(graph: &TannerGraph, g_max: usize) -> Result<CycleCensus> {
    check_len(g_max, true)?;
    Ok(census(graph, g_max))
}

fn census(graph: &TannerGraph, g_max: usize) -> CycleCensus {
    let n = graph.n();
    (0..n)
        .into_par_iter()
        .fold(
            || (CycleCensus::empty(n, g_max), None::<CycleWalker>),
            |(mut acc, walker), root| {
                let mut walker = walker.unwrap_or_else(|| CycleWalker::new(graph, None, g_max));
                walker.walk(root, &mut |len, vns| {
                    let s = (len - 4) / 2;
                    acc.totals[s] += 1;
                    for &v in vns {
                        acc.touches[s][v] += 1;
                    }
                });
                (acc, Some(walker))
            },
        )
        .map(|(acc, _)| acc)
        .reduce(|| CycleCensus::empty(n, g_max), CycleCensus::merge)
}

/// VN supports of every cycle of length exactly `len` in the graph with the
/// `removed` VNs purged, in a deterministic order.
pub fn collect_cycles(graph: &TannerGraph, removed: Option<&[bool]>, len: usize) -> Result<Vec<VnSet>> {
    check_len(len, true)?;
    let per_root: Vec<Vec<VnSet>> = (0..graph.n())
        .into_par_iter()
        .map_init(
            || CycleWalker::new(graph, removed, len),
            |walker, root| {
                let mut found = Vec::new();
                walker.walk(root, &mut |l, vns| {
                    if l == len {
                        found.push(VnSet::new(vns.iter().copied()));
                    }
                });
                found
            },
        )
        .collect();
    Ok(per_root.into_iter().flatten().collect())
}

/// Fraction of the `len`-cycles of the graph that touch at least one VN of
/// `set`; zero when there are no such cycles.
pub fn fraction_hit(graph: &TannerGraph, len: usize, set: &VnSet) -> Result<f64> {
    let cycles = collect_cycles(graph, None, len)?;
    if cycles.is_empty() {
        return Ok(0.0);
    }
    let hit = cycles.iter().filter(|c| c.intersects(set)).count();
    Ok(hit as f64 / cycles.len() as f64)
}

#[cfg(test)]
pub(crate) mod oracle {
    use super::*;

    /// Every simple cycle up to `g_max`, found by enumerating closed walks from
    /// every start and deduplicating by edge set. Only for tiny graphs.
    pub fn brute_cycles(graph: &TannerGraph, g_max: usize) -> Vec<(usize, VnSet)> {
        use std::collections::BTreeSet;
        let n = graph.n();
        let total = n + graph.m();
        let adj = |u: usize| -> Vec<usize> {
            if u < n {
                graph.vn_neighbors(u).iter().map(|&c| n + c).collect()
            } else {
                graph.cn_neighbors(u - n).to_vec()
            }
        };
        let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
        let mut out = Vec::new();
        fn rec(
            adj: &dyn Fn(usize) -> Vec<usize>,
            path: &mut Vec<usize>,
            g_max: usize,
            n: usize,
            seen: &mut BTreeSet<Vec<(usize, usize)>>,
            out: &mut Vec<(usize, VnSet)>,
        ) {
            let u = *path.last().unwrap();
            for w in adj(u) {
                if w == path[0] && path.len() >= 4 {
                    let mut edges: Vec<(usize, usize)> = path
                        .windows(2)
                        .map(|e| (e[0].min(e[1]), e[0].max(e[1])))
                        .collect();
                    edges.push((u.min(w), u.max(w)));
                    edges.sort();
                    if seen.insert(edges) {
                        let vns = VnSet::new(path.iter().copied().filter(|&x| x < n));
                        out.push((path.len(), vns));
                    }
                } else if !path.contains(&w) && path.len() < g_max {
                    path.push(w);
                    rec(adj, path, g_max, n, seen, out);
                    path.pop();
                }
            }
        }
        for s in 0..total {
            let mut path = vec![s];
            rec(&adj, &mut path, g_max, n, &mut seen, &mut out);
        }
        out
    }
}
