//! Entropy-constrained progressive edge growth.
//!
//! Runs PEG, but whenever every candidate CN for the next edge closes cycles
//! shorter than the cap `g_c`, the candidate is chosen to minimize the
//! entropy of the joint normalized cycle counts. That pulls new short cycles
//! onto the VNs that already carry many of them.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::peg::{self, Closure};
use crate::rng::{self, StageRng, Stream};
use crate::tanner::{Girth, TannerGraph, VnSet};

/// Two joint entropies closer than this are treated as equal.
pub const ENTROPY_TIE_TOLERANCE: f64 = 1e-12;

/// Shannon entropy in bits of a probability vector, with `0 log 0 = 0`.
/// The all-zero vector has entropy zero.
pub fn entropy(p: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &x in p {
        if !(x >= 0.0) {
            return invalid(format!("probability entries must be nonnegative, found {x}"));
        }
        sum += x;
    }
    if sum != 0.0 && (sum - 1.0).abs() > 1e-9 {
        return invalid(format!("probabilities must sum to 0 or 1, sum is {sum}"));
    }
    Ok(p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum())
}

/// Entropy of a nonnegative vector after scaling it to unit sum.
pub fn normalized_entropy(weights: &[f64]) -> Result<f64> {
    let sum: f64 = weights.iter().sum();
    if sum == 0.0 {
        return entropy(weights);
    }
    let p: Vec<f64> = weights.iter().map(|w| w / sum).collect();
    entropy(&p)
}

/// Construction-time cycle bookkeeping for lengths `4, 6, ..., g_c - 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleLedger {
    g_c: usize,
    n: usize,
    lambda: Vec<Vec<u64>>,
    considered: Vec<u64>,
    alpha: Vec<Vec<f64>>,
    alpha_joint: Vec<f64>,
}

impl CycleLedger {
    pub fn new(n: usize, g_c: usize) -> Result<Self> {
        if g_c < 6 || g_c % 2 != 0 {
            return invalid(format!("cycle cap must be even and at least 6, got {g_c}"));
        }
        let t = (g_c - 4) / 2;
        Ok(CycleLedger {
            g_c,
            n,
            lambda: vec![vec![0; n]; t],
            considered: vec![0; t],
            alpha: vec![vec![0.0; n]; t],
            alpha_joint: vec![0.0; n],
        })
    }

    pub fn g_c(&self) -> usize {
        self.g_c
    }

    /// Number of tracked lengths.
    pub fn num_lengths(&self) -> usize {
        self.lambda.len()
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> {
        (4..self.g_c).step_by(2)
    }

    fn slot(&self, g: usize) -> Result<usize> {
        if g < 4 || g % 2 != 0 || g >= self.g_c {
            return Err(Error::Untracked(format!("cycle length {g} with cap {}", self.g_c)));
        }
        Ok((g - 4) / 2)
    }

    /// Per-VN counts of considered `g`-cycles.
    pub fn lambda(&self, g: usize) -> Result<&[u64]> {
        Ok(&self.lambda[self.slot(g)?])
    }

    pub fn alpha(&self, g: usize) -> Result<&[f64]> {
        Ok(&self.alpha[self.slot(g)?])
    }

    pub fn alpha_joint(&self) -> &[f64] {
        &self.alpha_joint
    }

    /// Number of `g`-cycles recorded so far.
    pub fn considered(&self, g: usize) -> Result<u64> {
        Ok(self.considered[self.slot(g)?])
    }

    /// Adds newly created `g`-cycles and recomputes the normalized counts.
    pub fn record(&mut self, g: usize, cycles: &[VnSet]) -> Result<()> {
        let s = self.slot(g)?;
        for cyc in cycles {
            for v in cyc.iter() {
                self.lambda[s][v] += 1;
            }
        }
        self.considered[s] += cycles.len() as u64;
        let total: u64 = self.lambda[s].iter().sum();
        self.alpha[s] = normalize(&self.lambda[s], total);
        self.recompute_joint();
        Ok(())
    }

    fn recompute_joint(&mut self) {
        let t = self.num_lengths() as f64;
        for i in 0..self.n {
            self.alpha_joint[i] = self.alpha.iter().map(|a| a[i]).sum::<f64>() / t;
        }
    }

    /// Entropy of the joint normalized counts as they would be after adding
    /// `cycles` of length `g`. The ledger itself is left untouched.
    pub fn joint_entropy_with(&self, g: usize, cycles: &[VnSet]) -> Result<f64> {
        let s = self.slot(g)?;
        let mut delta: BTreeMap<usize, u64> = BTreeMap::new();
        for cyc in cycles {
            for v in cyc.iter() {
                *delta.entry(v).or_default() += 1;
            }
        }
        let added: u64 = delta.values().sum();
        let total = self.lambda[s].iter().sum::<u64>() + added;
        let t = self.num_lengths() as f64;
        let mut joint = vec![0.0; self.n];
        for (k, alpha) in self.alpha.iter().enumerate() {
            if k == s {
                continue;
            }
            for (j, a) in joint.iter_mut().zip(alpha) {
                *j += a;
            }
        }
        if total > 0 {
            for (i, j) in joint.iter_mut().enumerate() {
                let l = self.lambda[s][i] + delta.get(&i).copied().unwrap_or(0);
                *j += l as f64 / total as f64;
            }
        }
        for j in joint.iter_mut() {
            *j /= t;
        }
        normalized_entropy(&joint)
    }

    /// Entropy of the current joint normalized counts.
    pub fn joint_entropy(&self) -> Result<f64> {
        normalized_entropy(&self.alpha_joint)
    }

    pub fn to_json(&self, seed: u64, n: usize, m: usize, d_v: usize) -> Result<String> {
        #[derive(Serialize)]
        struct Params {
            n: usize,
            m: usize,
            d_v: usize,
        }
        #[derive(Serialize)]
        struct LedgerExport<'a> {
            g_c: usize,
            seed: u64,
            parameters: Params,
            lambda: BTreeMap<String, &'a [u64]>,
            considered_cycles: BTreeMap<String, u64>,
            alpha_joint: &'a [f64],
        }
        let export = LedgerExport {
            g_c: self.g_c,
            seed,
            parameters: Params { n, m, d_v },
            lambda: self.lengths().zip(&self.lambda).map(|(g, l)| (g.to_string(), l.as_slice())).collect(),
            considered_cycles: self.lengths().zip(&self.considered).map(|(g, &c)| (g.to_string(), c)).collect(),
            alpha_joint: &self.alpha_joint,
        };
        Ok(serde_json::to_string_pretty(&export)?)
    }
}

fn normalize(lambda: &[u64], total: u64) -> Vec<f64> {
    if total == 0 {
        vec![0.0; lambda.len()]
    } else {
        lambda.iter().map(|&l| l as f64 / total as f64).collect()
    }
}

/// VN supports of the `g`-cycles that adding edge `(cn, vn)` would close: one
/// per simple path of `g - 1` edges from `cn` to `vn` in the current graph.
pub fn new_cycles_through_edge(graph: &TannerGraph, cn: usize, vn: usize, g: usize) -> Result<Vec<VnSet>> {
    if g < 4 || g % 2 != 0 {
        return invalid(format!("cycle length must be even and at least 4, got {g}"));
    }
    if vn >= graph.n() || cn >= graph.m() {
        return invalid("edge endpoint out of range");
    }
    if graph.has_edge(vn, cn) {
        return Err(Error::DuplicateEdge { vn: vn + 1, cn: cn + 1 });
    }
    let n = graph.n();
    let path_len = g - 1;
    // distances to `vn`, for pruning
    let mut dist = vec![usize::MAX; n + graph.m()];
    dist[vn] = 0;
    let mut frontier = vec![vn];
    let mut d = 0;
    while !frontier.is_empty() && d < path_len {
        d += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            let nbrs: &[usize] = if u < n { graph.vn_neighbors(u) } else { graph.cn_neighbors(u - n) };
            for &w in nbrs {
                let w = if u < n { n + w } else { w };
                if dist[w] == usize::MAX {
                    dist[w] = d;
                    next.push(w);
                }
            }
        }
        frontier = next;
    }

    struct Search<'a> {
        graph: &'a TannerGraph,
        target: usize,
        path_len: usize,
        dist: Vec<usize>,
        on_path: Vec<bool>,
        vns: Vec<usize>,
        out: Vec<VnSet>,
    }
    impl Search<'_> {
        // at CN `c` after `len` edges
        fn from_cn(&mut self, c: usize, len: usize) {
            let n = self.graph.n();
            let graph = self.graph;
            for &v in graph.cn_neighbors(c) {
                if self.on_path[v] || (len + 1).saturating_add(self.dist[v]) > self.path_len {
                    continue;
                }
                if v == self.target {
                    if len + 1 == self.path_len {
                        self.vns.push(v);
                        self.out.push(VnSet::new(self.vns.iter().copied()));
                        self.vns.pop();
                    }
                    continue;
                }
                self.on_path[v] = true;
                self.vns.push(v);
                for &c2 in graph.vn_neighbors(v) {
                    if self.on_path[n + c2] || (len + 2).saturating_add(self.dist[n + c2]) > self.path_len {
                        continue;
                    }
                    self.on_path[n + c2] = true;
                    self.from_cn(c2, len + 2);
                    self.on_path[n + c2] = false;
                }
                self.vns.pop();
                self.on_path[v] = false;
            }
        }
    }

    let mut search = Search {
        graph,
        target: vn,
        path_len,
        dist,
        on_path: vec![false; n + graph.m()],
        vns: Vec::new(),
        out: Vec::new(),
    };
    search.on_path[n + cn] = true;
    search.from_cn(cn, 0);
    Ok(search.out)
}

/// Outcome of an entropy-constrained CN choice.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySelection {
    pub cn: usize,
    /// Joint entropy after the edge is added.
    pub entropy: f64,
    /// The `g`-cycles the chosen edge closes.
    pub cycles: Vec<VnSet>,
}

/// Chooses the candidate whose new `g`-cycles give the lowest joint entropy.
/// Ties (within [`ENTROPY_TIE_TOLERANCE`]) go to the lowest current CN degree,
/// then uniformly at random.
pub fn entropy_constrained_select(
    graph: &TannerGraph,
    candidates: &[usize],
    vn: usize,
    g: usize,
    ledger: &CycleLedger,
    rng: &mut StageRng,
) -> Result<EntropySelection> {
    if candidates.is_empty() {
        return invalid("candidate set is empty");
    }
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let scored = sorted
        .par_iter()
        .map(|&c| {
            let cycles = new_cycles_through_edge(graph, c, vn, g)?;
            let h = ledger.joint_entropy_with(g, &cycles)?;
            Ok((c, h, cycles))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = scored.iter().map(|(_, h, _)| *h).fold(f64::INFINITY, f64::min);
    let tied: Vec<&(usize, f64, Vec<VnSet>)> = scored
        .iter()
        .filter(|(_, h, _)| *h - best <= ENTROPY_TIE_TOLERANCE)
        .collect();
    let min_deg = tied.iter().map(|(c, _, _)| graph.cn_degree(*c)).min().expect("nonempty");
    let finalists: Vec<usize> = tied
        .iter()
        .enumerate()
        .filter(|(_, (c, _, _))| graph.cn_degree(*c) == min_deg)
        .map(|(i, _)| i)
        .collect();
    let (cn, h, cycles) = tied[peg::pick(&finalists, rng)].clone();
    Ok(EntropySelection { cn, entropy: h, cycles })
}

/// Result of an entropy-constrained construction.
#[derive(Debug, Clone)]
pub struct EcpegOutput {
    pub graph: TannerGraph,
    pub ledger: CycleLedger,
    pub girth: Girth,
}

/// Builds an `n`-VN, `m`-CN graph with VN degree `d_v`, tracking and
/// concentrating cycles shorter than `g_c`.
pub fn build_ecpeg(n: usize, m: usize, d_v: usize, g_c: usize, seed: u64) -> Result<EcpegOutput> {
    peg::check_params(n, m, d_v)?;
    let mut ledger = CycleLedger::new(n, g_c)?;
    let mut rng = rng::stream(seed, Stream::Construction);
    let mut graph = TannerGraph::new(n, m, d_v);
    for v in 0..n {
        for k in 0..d_v {
            let c = if k == 0 {
                peg::first_cn_select(&graph, &mut rng)
            } else {
                let found = peg::peg_candidates(&graph, v)?;
                match found.closure {
                    Closure::Cycle { length } if length < g_c => {
                        let sel = entropy_constrained_select(&graph, &found.candidates, v, length, &ledger, &mut rng)?;
                        ledger.record(length, &sel.cycles)?;
                        sel.cn
                    }
                    _ => peg::min_degree_select(&graph, &found.candidates, &mut rng)?,
                }
            };
            graph.add_edge(v, c)?;
        }
    }
    graph.set_d_v(d_v);
    let girth = graph.girth();
    Ok(EcpegOutput { graph, ledger, girth })
}

/// Parameters and outcome of a construction, as written next to the code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSummary {
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub d_v: usize,
    pub g_c: Option<usize>,
    pub seed: u64,
    pub girth: Girth,
    pub max_cn_degree: usize,
}
