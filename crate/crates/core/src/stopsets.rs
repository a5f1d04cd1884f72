//! Stopping sets: membership, exhaustive enumeration up to a weight bound,
//! the `ss^mu` distributions, and the peeling decoder on the erasure channel.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::tanner::{TannerGraph, VnSet};

/// Search nodes the enumerator may visit before giving up.
pub const DEFAULT_WORK_BUDGET: u64 = 200_000_000;

/// True iff every CN adjacent to `set` sees at least two of its VNs.
/// The empty set is rejected.
pub fn is_stopping_set(graph: &TannerGraph, set: &VnSet) -> Result<bool> {
    if set.is_empty() {
        return invalid("the empty set is not considered a stopping set");
    }
    set.check_within(graph.n())?;
    let mut seen = vec![0u8; graph.m()];
    for v in set.iter() {
        for &c in graph.vn_neighbors(v) {
            seen[c] = seen[c].saturating_add(1);
        }
    }
    Ok(seen.iter().all(|&k| k != 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeelOutcome {
    Decoded,
    /// Erasures left once no CN sees a single one; the largest stopping set
    /// inside the erasure pattern.
    Stuck(VnSet),
}

impl PeelOutcome {
    pub fn is_decoded(&self) -> bool {
        matches!(self, PeelOutcome::Decoded)
    }
}

/// Iterative erasure decoding: a CN with exactly one erased neighbor
/// recovers it, until nothing changes.
pub fn peel_decode(graph: &TannerGraph, erased: &VnSet) -> Result<PeelOutcome> {
    erased.check_within(graph.n())?;
    let mut is_erased = erased.mask(graph.n());
    let mut count = vec![0usize; graph.m()];
    for v in erased.iter() {
        for &c in graph.vn_neighbors(v) {
            count[c] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..graph.m()).filter(|&c| count[c] == 1).collect();
    while let Some(c) = queue.pop_front() {
        if count[c] != 1 {
            continue;
        }
        let v = *graph
            .cn_neighbors(c)
            .iter()
            .find(|&&v| is_erased[v])
            .expect("count tracks erased neighbors");
        is_erased[v] = false;
        for &d in graph.vn_neighbors(v) {
            count[d] -= 1;
            if count[d] == 1 {
                queue.push_back(d);
            }
        }
    }
    let residual: VnSet = (0..graph.n()).filter(|&v| is_erased[v]).collect();
    Ok(if residual.is_empty() { PeelOutcome::Decoded } else { PeelOutcome::Stuck(residual) })
}

/// Every nonempty stopping set of weight at most `mu_max`, grouped by weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoppingSetCatalog {
    n: usize,
    mu_max: usize,
    /// `by_weight[mu]` is sorted; index 0 is always empty.
    by_weight: Vec<Vec<VnSet>>,
}

impl StoppingSetCatalog {
    fn from_sets(n: usize, mu_max: usize, sets: impl IntoIterator<Item = VnSet>) -> Self {
        let mut by_weight = vec![Vec::new(); mu_max + 1];
        for s in sets {
            by_weight[s.len()].push(s);
        }
        for w in &mut by_weight {
            w.sort();
        }
        StoppingSetCatalog { n, mu_max, by_weight }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu_max(&self) -> usize {
        self.mu_max
    }

    /// Smallest weight with at least one stopping set, if any is within `mu_max`.
    pub fn min_size(&self) -> Option<usize> {
        self.by_weight.iter().position(|w| !w.is_empty())
    }

    fn check_mu(&self, mu: usize) -> Result<()> {
        if mu == 0 || mu > self.mu_max {
            return Err(Error::Untracked(format!("weight {mu} (catalog covers 1..={})", self.mu_max)));
        }
        Ok(())
    }

    pub fn sets(&self, mu: usize) -> Result<&[VnSet]> {
        self.check_mu(mu)?;
        Ok(&self.by_weight[mu])
    }

    pub fn count(&self, mu: usize) -> Result<usize> {
        Ok(self.sets(mu)?.len())
    }

    pub fn iter(&self) -> impl Iterator<Item = &VnSet> {
        self.by_weight.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_weight.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Weights between 1 and `mu_max` with at least one stopping set.
    pub fn nonempty_weights(&self) -> Vec<usize> {
        (1..=self.mu_max).filter(|&mu| !self.by_weight[mu].is_empty()).collect()
    }

    /// `ss^mu`: per VN, the fraction of weight-`mu` stopping sets containing it.
    /// All zero when there are none.
    pub fn ss_distribution(&self, mu: usize) -> Result<Vec<f64>> {
        let sets = self.sets(mu)?;
        let mut out = vec![0.0; self.n];
        if sets.is_empty() {
            return Ok(out);
        }
        for s in sets {
            for v in s.iter() {
                out[v] += 1.0;
            }
        }
        let total = sets.len() as f64;
        out.iter_mut().for_each(|x| *x /= total);
        Ok(out)
    }

    /// Fraction of weight-`mu` stopping sets that `sample` intersects; zero
    /// when there are none.
    pub fn tau(&self, sample: &VnSet, mu: usize) -> Result<f64> {
        let sets = self.sets(mu)?;
        if sets.is_empty() {
            return Ok(0.0);
        }
        let hit = sets.iter().filter(|s| s.intersects(sample)).count();
        Ok(hit as f64 / sets.len() as f64)
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Export {
            n: usize,
            mu_max: usize,
            min_size: Option<usize>,
            counts: BTreeMap<String, usize>,
            sets: BTreeMap<String, Vec<Vec<usize>>>,
            ss: BTreeMap<String, Vec<f64>>,
        }
        let mut export = Export {
            n: self.n,
            mu_max: self.mu_max,
            min_size: self.min_size(),
            counts: BTreeMap::new(),
            sets: BTreeMap::new(),
            ss: BTreeMap::new(),
        };
        for mu in 1..=self.mu_max {
            let key = format!("{mu:02}");
            export.counts.insert(key.clone(), self.by_weight[mu].len());
            export.sets.insert(key.clone(), self.by_weight[mu].iter().map(VnSet::one_based).collect());
            export.ss.insert(key, self.ss_distribution(mu)?);
        }
        Ok(serde_json::to_string_pretty(&export)?)
    }

    /// CSV with one row per VN (one-based) in `order` and one `ss<mu>` column
    /// per weight.
    pub fn ss_csv(&self, order: &[usize]) -> Result<String> {
        let dists: Vec<Vec<f64>> = (1..=self.mu_max).map(|mu| self.ss_distribution(mu)).collect::<Result<_>>()?;
        let mut out = String::from("vn");
        for mu in 1..=self.mu_max {
            let _ = write!(out, ",ss{mu}");
        }
        out.push('\n');
        for &v in order {
            if v >= self.n {
                return invalid(format!("VN index {v} out of range"));
            }
            let _ = write!(out, "{}", v + 1);
            for d in &dists {
                let _ = write!(out, ",{}", d[v]);
            }
            out.push('\n');
        }
        Ok(out)
    }
}

/// Branch-and-bound search for the stopping sets whose lowest VN is `root`.
struct Search<'a> {
    graph: &'a TannerGraph,
    mu_max: usize,
    max_degree: usize,
    in_set: Vec<bool>,
    blocked: Vec<u32>,
    count: Vec<u32>,
    members: Vec<usize>,
    found: Vec<VnSet>,
    work: &'a AtomicU64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(graph: &'a TannerGraph, mu_max: usize, work: &'a AtomicU64, budget: u64) -> Self {
        Search {
            graph,
            mu_max,
            max_degree: graph.max_vn_degree().max(1),
            in_set: vec![false; graph.n()],
            blocked: vec![0; graph.n()],
            count: vec![0; graph.m()],
            members: Vec::new(),
            found: Vec::new(),
            work,
            budget,
        }
    }

    fn available(&self, v: usize) -> bool {
        !self.in_set[v] && self.blocked[v] == 0
    }

    fn push(&mut self, v: usize) {
        self.in_set[v] = true;
        self.members.push(v);
        for &c in self.graph.vn_neighbors(v) {
            self.count[c] += 1;
        }
    }

    fn pop(&mut self, v: usize) {
        self.in_set[v] = false;
        self.members.pop();
        for &c in self.graph.vn_neighbors(v) {
            self.count[c] -= 1;
        }
    }

    fn run(mut self, root: usize) -> Result<Vec<VnSet>> {
        for v in 0..root {
            self.blocked[v] += 1;
        }
        self.push(root);
        self.descend()?;
        Ok(self.found)
    }

    /// Explores each candidate in turn, excluding the earlier ones from the
    /// later branches so that every completion is reached exactly once.
    fn branch(&mut self, candidates: &[usize]) -> Result<()> {
        for &u in candidates {
            self.push(u);
            let r = self.descend();
            self.pop(u);
            r?;
            self.blocked[u] += 1;
        }
        for &u in candidates {
            self.blocked[u] -= 1;
        }
        Ok(())
    }

    fn descend(&mut self) -> Result<()> {
        if self.work.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        // CNs seen exactly once; each is reached from a single member
        let mut deficient = 0usize;
        let mut target: Option<(usize, usize)> = None;
        for &v in &self.members {
            for &c in self.graph.vn_neighbors(v) {
                if self.count[c] != 1 {
                    continue;
                }
                deficient += 1;
                let open = self.graph.cn_neighbors(c).iter().filter(|&&u| self.available(u)).count();
                if open == 0 {
                    return Ok(());
                }
                if target.is_none_or(|(k, _)| open < k) {
                    target = Some((open, c));
                }
            }
        }
        let room = self.mu_max - self.members.len();
        match target {
            None => {
                self.found.push(VnSet::new(self.members.iter().copied()));
                if room > 0 {
                    let candidates: Vec<usize> = (0..self.graph.n()).filter(|&u| self.available(u)).collect();
                    self.branch(&candidates)?;
                }
                Ok(())
            }
            Some((_, c)) => {
                // each added VN repairs at most max_degree deficient CNs
                if deficient.div_ceil(self.max_degree) > room {
                    return Ok(());
                }
                let candidates: Vec<usize> =
                    self.graph.cn_neighbors(c).iter().copied().filter(|&u| self.available(u)).collect();
                self.branch(&candidates)
            }
        }
    }
}

/// Exhaustive catalog of the nonempty stopping sets of weight `<= mu_max`,
/// using [`DEFAULT_WORK_BUDGET`].
pub fn enumerate_stopping_sets(graph: &TannerGraph, mu_max: usize) -> Result<StoppingSetCatalog> {
    enumerate_stopping_sets_with_budget(graph, mu_max, DEFAULT_WORK_BUDGET)
}

/// Branch-and-bound enumeration over VN subsets rooted at their lowest VN.
/// Fails with [`Error::BudgetExceeded`] rather than returning a partial catalog.
pub fn enumerate_stopping_sets_with_budget(graph: &TannerGraph, mu_max: usize, budget: u64) -> Result<StoppingSetCatalog> {
    if mu_max == 0 {
        return invalid("mu_max must be at least 1");
    }
    let work = AtomicU64::new(0);
    let per_root: Vec<Vec<VnSet>> = (0..graph.n())
        .into_par_iter()
        .map(|root| Search::new(graph, mu_max, &work, budget).run(root))
        .collect::<Result<_>>()?;
    Ok(StoppingSetCatalog::from_sets(graph.n(), mu_max, per_root.into_iter().flatten()))
}

/// Result of enumerating with growing weight bounds under a fixed budget.
#[derive(Debug, Clone)]
pub struct ProgressiveCatalog {
    /// Catalog for the largest completed bound, if any bound completed.
    pub catalog: Option<StoppingSetCatalog>,
    /// Largest bound whose enumeration finished (0 if none).
    pub completed: usize,
    /// First bound that ran out of budget, if the target was not reached.
    pub exceeded_at: Option<usize>,
}

/// Enumerates with bounds `1, 2, ..., mu_target`, each under `budget`, and
/// stops at the first bound that exceeds it.
pub fn enumerate_progressive(graph: &TannerGraph, mu_target: usize, budget: u64) -> Result<ProgressiveCatalog> {
    if mu_target == 0 {
        return invalid("mu_max must be at least 1");
    }
    let mut out = ProgressiveCatalog {
        catalog: None,
        completed: 0,
        exceeded_at: None,
    };
    for mu in 1..=mu_target {
        match enumerate_stopping_sets_with_budget(graph, mu, budget) {
            Ok(cat) => {
                out.catalog = Some(cat);
                out.completed = mu;
            }
            Err(Error::BudgetExceeded { .. }) => {
                out.exceeded_at = Some(mu);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaProvenance {
    /// Published closed form `1 + d_v^2` at girth 10.
    Paper,
    UserSupplied,
    /// Counting argument on the tree-like neighborhood of a VN.
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SigmaBound {
    pub value: usize,
    pub provenance: SigmaProvenance,
}

/// User-supplied lower bounds on the minimum stopping-set weight of
/// `d_v`-regular codes, keyed by girth.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SigmaTable {
    d_v: usize,
    entries: BTreeMap<usize, usize>,
}

impl SigmaTable {
    pub fn new(d_v: usize) -> Self {
        SigmaTable { d_v, entries: BTreeMap::new() }
    }

    pub fn d_v(&self) -> usize {
        self.d_v
    }

    /// Adds a bound, keeping the entries nondecreasing in the girth.
    pub fn insert(&mut self, g: usize, value: usize) -> Result<()> {
        check_sigma_girth(g)?;
        if value == 0 {
            return invalid("a stopping-set weight bound must be positive");
        }
        let below = self.entries.range(..g).next_back().map(|(_, &v)| v);
        let above = self.entries.range(g + 1..).next().map(|(_, &v)| v);
        if below.is_some_and(|b| b > value) || above.is_some_and(|a| a < value) {
            return invalid(format!("bound {value} at girth {g} breaks monotonicity in the girth"));
        }
        self.entries.insert(g, value);
        Ok(())
    }

    pub fn get(&self, g: usize) -> Option<usize> {
        self.entries.get(&g).copied()
    }
}

fn check_sigma_girth(g: usize) -> Result<()> {
    if g < 6 || g % 2 != 0 {
        return invalid(format!("girth must be even and at least 6, got {g}"));
    }
    Ok(())
}

/// Lower bound on the weight of a stopping set in a `d_v`-regular graph of
/// girth at least `g`, from the tree spanned by one member VN.
///
/// VNs within distance `g/2 - 1` of the root are distinct. When that depth
/// ends on CNs, each of those CNs needs another member, and a new VN can
/// serve at most `d_v` of them.
pub fn tree_sigma_bound(d_v: usize, g: usize) -> Result<usize> {
    check_sigma_girth(g)?;
    if d_v < 2 {
        return invalid("VN degree must be at least 2");
    }
    let depth = g / 2 - 1;
    let mut total = 1usize;
    let mut layer = d_v; // VNs at distance 2
    let mut dist = 2;
    while dist <= depth {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(d_v - 1);
        dist += 2;
    }
    if depth % 2 == 1 {
        // `layer` now counts the CNs at distance `depth`
        total = total.saturating_add(layer.div_ceil(d_v));
    }
    Ok(total)
}

/// Best known lower bound on the minimum stopping-set weight for girth `g`.
/// A table entry wins, then the published girth-10 value, then the tree
/// bound. `None` when the degree admits no bound.
pub fn sigma_lower_bound(d_v: usize, g: usize, table: Option<&SigmaTable>) -> Result<Option<SigmaBound>> {
    check_sigma_girth(g)?;
    if let Some(value) = table.filter(|t| t.d_v == d_v).and_then(|t| t.get(g)) {
        return Ok(Some(SigmaBound {
            value,
            provenance: SigmaProvenance::UserSupplied,
        }));
    }
    if d_v < 2 {
        return Ok(None);
    }
    if g == 10 {
        return Ok(Some(SigmaBound {
            value: 1 + d_v * d_v,
            provenance: SigmaProvenance::Paper,
        }));
    }
    Ok(Some(SigmaBound {
        value: tree_sigma_bound(d_v, g)?,
        provenance: SigmaProvenance::Derived,
    }))
}


#[cfg(test)]
mod tests {
    use super::oracle::*;
    use super::*;
    use crate::peg::build_peg;
    use crate::tanner::fixtures::*;
    use crate::tanner::{induced_girth, Girth};

    #[test]
    fn membership_examples() {
        let g = path_code();
        assert!(is_stopping_set(&g, &VnSet::new([0, 1, 2])).unwrap());
        assert!(!is_stopping_set(&g, &VnSet::new([0, 1])).unwrap());
        assert!(!is_stopping_set(&g, &VnSet::new([0])).unwrap());
        assert!(is_stopping_set(&g, &VnSet::empty()).is_err());
        assert!(is_stopping_set(&g, &VnSet::new([5])).is_err());
    }

    #[test]
    fn path_code_catalog() {
        let g = path_code();
        let cat = enumerate_stopping_sets(&g, 3).unwrap();
        assert_eq!(cat.len(), 1);
        assert_eq!(cat.sets(3).unwrap(), &[VnSet::new([0, 1, 2])]);
        assert_eq!(cat.min_size(), Some(3));
        assert_eq!(cat.ss_distribution(3).unwrap(), vec![1.0, 1.0, 1.0]);
        assert_eq!(cat.tau(&VnSet::new([0]), 3).unwrap(), 1.0);
        assert_eq!(cat.tau(&VnSet::empty(), 3).unwrap(), 0.0);
        assert_eq!(cat.tau(&VnSet::new([1]), 2).unwrap(), 0.0);
        assert!(cat.sets(4).is_err());
        assert!(cat.sets(0).is_err());
    }

    #[test]
    fn six_ring_is_a_stopping_set() {
        let cat = enumerate_stopping_sets(&six_ring(), 3).unwrap();
        assert_eq!(cat.sets(3).unwrap(), &[VnSet::new([0, 1, 2])]);
        assert_eq!(cat.min_size(), Some(3));
        let small = enumerate_stopping_sets(&six_ring(), 2).unwrap();
        assert_eq!(small.min_size(), None);
        assert!(small.is_empty());
    }

    #[test]
    fn isolated_vn_is_vacuously_stopping() {
        let g = TannerGraph::from_edges(2, 1, [(0, 0)]).unwrap();
        let cat = enumerate_stopping_sets(&g, 2).unwrap();
        assert_eq!(cat.sets(1).unwrap(), &[VnSet::new([1])]);
        assert_eq!(peel_decode(&g, &VnSet::new([1])).unwrap(), PeelOutcome::Stuck(VnSet::new([1])));
    }

    #[test]
    fn branch_and_bound_matches_subset_scan() {
        for seed in 0..24 {
            let n = 6 + (seed as usize % 7);
            let m = 3 + (seed as usize % 5);
            let d = 1 + (seed as usize % 3).min(m - 1);
            let g = random_graph(n, m, d, seed);
            let want = naive_stopping_sets(&g, n);
            for mu in [1, 3, n / 2, n] {
                let cat = enumerate_stopping_sets(&g, mu.max(1)).unwrap();
                let got: Vec<VnSet> = cat.iter().cloned().collect();
                let expect: Vec<VnSet> = want.iter().filter(|s| s.len() <= mu.max(1)).cloned().collect();
                assert_eq!(got, expect, "seed {seed} mu {mu}");
            }
        }
    }

    #[test]
    fn peeling_examples() {
        let g = path_code();
        assert_eq!(peel_decode(&g, &VnSet::empty()).unwrap(), PeelOutcome::Decoded);
        assert_eq!(peel_decode(&g, &VnSet::new([0, 1])).unwrap(), PeelOutcome::Decoded);
        let all = VnSet::new([0, 1, 2]);
        assert_eq!(peel_decode(&g, &all).unwrap(), PeelOutcome::Stuck(all));
    }

    #[test]
    fn peeling_duality_on_small_graphs() {
        for seed in 0..6 {
            let g = random_graph(10, 6, 2, 100 + seed);
            let stopping = naive_stopping_sets(&g, 10);
            for mask in 0u32..1 << 10 {
                let e: VnSet = (0..10).filter(|v| mask >> v & 1 == 1).collect();
                let out = peel_decode(&g, &e).unwrap();
                let contains = stopping.iter().any(|s| s.is_subset(&e));
                assert_eq!(out.is_decoded(), !contains);
                if let PeelOutcome::Stuck(r) = out {
                    assert!(is_stopping_set(&g, &r).unwrap());
                    // maximal: union of all stopping sets inside e
                    let union: VnSet = stopping.iter().filter(|s| s.is_subset(&e)).flat_map(|s| s.iter()).collect();
                    assert_eq!(r, union);
                }
            }
        }
    }

    #[test]
    fn budget_is_reported_not_truncated() {
        let g = complete(8, 4);
        assert!(matches!(
            enumerate_stopping_sets_with_budget(&g, 8, 10),
            Err(Error::BudgetExceeded { budget: 10 })
        ));
        let p = enumerate_progressive(&g, 8, 50).unwrap();
        assert!(p.exceeded_at.is_some());
        assert_eq!(p.exceeded_at, Some(p.completed + 1));
        let full = enumerate_progressive(&g, 3, u64::MAX).unwrap();
        assert_eq!(full.completed, 3);
        assert_eq!(full.exceeded_at, None);
    }

    #[test]
    fn sigma_examples() {
        let b = sigma_lower_bound(4, 10, None).unwrap().unwrap();
        assert_eq!(b.value, 17);
        assert_eq!(b.provenance, SigmaProvenance::Paper);
        assert_eq!(sigma_lower_bound(3, 10, None).unwrap().unwrap().value, 10);
        assert_eq!(sigma_lower_bound(4, 6, None).unwrap().unwrap().value, 5);
        assert_eq!(sigma_lower_bound(4, 8, None).unwrap().unwrap().value, 8);
        // the counting argument agrees with the closed form at girth 10
        for d in 2..7 {
            assert_eq!(tree_sigma_bound(d, 10).unwrap(), 1 + d * d);
        }
        let mut t = SigmaTable::new(4);
        t.insert(6, 6).unwrap();
        assert!(t.insert(8, 5).is_err());
        let b = sigma_lower_bound(4, 6, Some(&t)).unwrap().unwrap();
        assert_eq!((b.value, b.provenance), (6, SigmaProvenance::UserSupplied));
        assert!(sigma_lower_bound(4, 7, None).is_err());
        assert_eq!(sigma_lower_bound(1, 6, None).unwrap(), None);
    }

    #[test]
    fn tree_bound_is_nondecreasing() {
        for d in 2..6 {
            let v: Vec<usize> = (6..=16).step_by(2).map(|g| tree_sigma_bound(d, g).unwrap()).collect();
            assert!(v.windows(2).all(|w| w[0] <= w[1]), "{v:?}");
        }
    }

    /// Smallest stopping set whose own subgraph has girth >= g, by exhaustive search.
    fn min_cycle_free_weight(graph: &TannerGraph, g: usize) -> Option<usize> {
        naive_stopping_sets(graph, graph.n())
            .into_iter()
            .filter(|s| induced_girth(graph, s) >= Girth::Finite(g))
            .map(|s| s.len())
            .min()
    }

    #[test]
    fn sigma_bounds_hold_on_small_regular_graphs() {
        // a ring of k VNs has girth 2k and a single stopping set of weight k
        for k in 3..8 {
            let edges: Vec<(usize, usize)> = (0..k).flat_map(|i| [(i, i), (i, (i + 1) % k)]).collect();
            let ring = TannerGraph::from_edges(k, k, edges).unwrap();
            let g = ring.girth().finite().unwrap();
            for gg in (6..=g).step_by(2) {
                let bound = sigma_lower_bound(2, gg, None).unwrap().unwrap().value;
                assert!(min_cycle_free_weight(&ring, gg).unwrap() >= bound);
            }
        }
        // d_v = 3 and 4 graphs of girth >= 6
        for (n, m, d, seed) in [(12, 9, 3, 1), (14, 10, 3, 2), (12, 12, 4, 3), (14, 14, 4, 4)] {
            let g = build_peg(n, m, d, seed).unwrap();
            let girth = g.girth();
            if girth < Girth::Finite(6) {
                continue;
            }
            let bound = sigma_lower_bound(d, 6, None).unwrap().unwrap().value;
            if let Some(w) = min_cycle_free_weight(&g, 6) {
                assert!(w >= bound, "n={n} d={d}: {w} < {bound}");
            }
            if girth >= Girth::Finite(8) {
                if let Some(w) = min_cycle_free_weight(&g, 8) {
                    assert!(w >= sigma_lower_bound(d, 8, None).unwrap().unwrap().value);
                }
            }
        }
    }

    #[test]
    fn small_weight_sets_contain_short_cycles() {
        for seed in 0..4 {
            let g = build_peg(14, 10, 3, seed).unwrap();
            let cat = enumerate_stopping_sets(&g, 14).unwrap();
            for gg in [6, 8, 10] {
                let bound = sigma_lower_bound(3, gg, None).unwrap().unwrap().value;
                for s in cat.iter().filter(|s| s.len() < bound) {
                    assert!(induced_girth(&g, s) < Girth::Finite(gg), "{s:?}");
                }
            }
            // no degree-1 VNs, so every stopping set holds a cycle
            for s in cat.iter() {
                assert!(induced_girth(&g, s).is_finite());
            }
        }
    }

    #[test]
    fn catalog_exports() {
        let cat = enumerate_stopping_sets(&path_code(), 3).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cat.to_json().unwrap()).unwrap();
        assert_eq!(v["min_size"], 3);
        assert_eq!(v["sets"]["03"][0], serde_json::json!([1, 2, 3]));
        assert_eq!(v["counts"]["01"], 0);
        let csv = cat.ss_csv(&[2, 0, 1]).unwrap();
        assert_eq!(csv, "vn,ss1,ss2,ss3\n3,0,0,1\n1,0,0,1\n2,0,0,1\n");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn enumeration_matches_oracle(n in 2usize..12, m in 2usize..8, d in 1usize..4, seed in any::<u64>(), mu in 1usize..12) {
                let d = d.min(m);
                let g = random_graph(n, m, d, seed);
                let cat = enumerate_stopping_sets(&g, mu).unwrap();
                let got: Vec<VnSet> = cat.iter().cloned().collect();
                prop_assert_eq!(got, naive_stopping_sets(&g, mu));
                for s in cat.iter() {
                    prop_assert!(is_stopping_set(&g, s).unwrap());
                    prop_assert_eq!(peel_decode(&g, s).unwrap(), PeelOutcome::Stuck(s.clone()));
                }
                for mu in 1..=cat.mu_max() {
                    let ss = cat.ss_distribution(mu).unwrap();
                    let k = cat.count(mu).unwrap();
                    if k > 0 {
                        let sum: f64 = ss.iter().sum();
                        prop_assert!((sum - mu as f64).abs() < 1e-9);
                        prop_assert_eq!(cat.tau(&VnSet::new(0..n), mu).unwrap(), 1.0);
                    } else {
                        prop_assert!(ss.iter().all(|&x| x == 0.0));
                    }
                }
            }
        }
    }
}
