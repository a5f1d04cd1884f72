//! Greedy cover sets and the sample sets built from them.
//!
//! For each cycle length `g` from the girth up to `g_c - 2`, the cover set
//! `C_g` starts from the previous level's set and keeps adding a VN that
//! touches the most surviving `g`-cycles (ties broken at random), purging it,
//! until no `g`-cycle survives. `C_{g-2}` is then a `g`-sample set: purging it
//! leaves no cycle shorter than `g`.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::cycles::{collect_cycles, enumerate_cycles_unbounded};
use crate::error::{invalid, Result};
use crate::peg::pick;
use crate::rng::{self, Stream};
use crate::tanner::{Girth, TannerGraph, VnSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverEntry {
    pub vn: usize,
    /// Cycles of the entry's level that the VN touched, in the purged graph,
    /// when it was added.
    pub touches: u64,
}

/// Cover set of one cycle length, in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSet {
    pub g: usize,
    pub members: Vec<CoverEntry>,
    /// Leading members carried over from the previous level.
    pub inherited: usize,
}

impl CoverSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_set(&self) -> VnSet {
        self.members.iter().map(|e| e.vn).collect()
    }

    /// Members added at this level.
    pub fn added(&self) -> &[CoverEntry] {
        &self.members[self.inherited..]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSetFamily {
    n: usize,
    g_min: Girth,
    g_c: usize,
    seed: u64,
    covers: Vec<CoverSet>,
}

/// How Strategy-1 ranks the newly added VNs of a level.
#[derive(Debug, Clone, Copy)]
pub enum TouchRanking<'a> {
    /// Counts recorded in the purged graph during the greedy construction.
    Recorded,
    /// Counts of the level's cycles in the untouched graph.
    OriginalGraph(&'a TannerGraph),
}

/// Runs the greedy cover construction for every length from the girth up to
/// `g_c - 2`. A graph without cycles shorter than `g_c` yields no covers.
pub fn greedy_cover_sets(graph: &TannerGraph, g_c: usize, seed: u64) -> Result<SampleSetFamily> {
    if g_c < 6 || g_c % 2 != 0 {
        return invalid(format!("cycle cap must be even and at least 6, got {g_c}"));
    }
    let n = graph.n();
    let g_min = graph.girth();
    let mut rng = rng::stream(seed, Stream::CoverSets);
    let mut covers: Vec<CoverSet> = Vec::new();
    let start = match g_min {
        Girth::Finite(g) if g < g_c => g,
        _ => g_c,
    };
    for g in (start..g_c).step_by(2) {
        let mut members = covers.last().map(|c| c.members.clone()).unwrap_or_default();
        let inherited = members.len();
        let mut removed = vec![false; n];
        for e in &members {
            removed[e.vn] = true;
        }
        let cycles = collect_cycles(graph, Some(&removed), g)?;
        let mut by_vn: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut counts = vec![0u64; n];
        for (i, cyc) in cycles.iter().enumerate() {
            for v in cyc.iter() {
                by_vn[v].push(i);
                counts[v] += 1;
            }
        }
        let mut alive = vec![true; cycles.len()];
        let mut remaining = cycles.len();
        while remaining > 0 {
            let best = *counts.iter().max().expect("n > 0 when cycles exist");
            let ties: Vec<usize> = (0..n).filter(|&v| counts[v] == best).collect();
            let v = pick(&ties, &mut rng);
            members.push(CoverEntry { vn: v, touches: best });
            for &i in &by_vn[v] {
                if alive[i] {
                    alive[i] = false;
                    remaining -= 1;
                    for u in cycles[i].iter() {
                        counts[u] -= 1;
                    }
                }
            }
        }
        covers.push(CoverSet { g, members, inherited });
    }
    Ok(SampleSetFamily {
        n,
        g_min,
        g_c,
        seed,
        covers,
    })
}

impl SampleSetFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g_min(&self) -> Girth {
        self.g_min
    }

    pub fn g_c(&self) -> usize {
        self.g_c
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn covers(&self) -> &[CoverSet] {
        &self.covers
    }

    /// Cover set for length `g`, if that length was processed.
    pub fn cover(&self, g: usize) -> Option<&CoverSet> {
        self.covers.iter().find(|c| c.g == g)
    }

    /// The greedy `g`-sample set `C_{g-2}`; empty when no cycle is shorter than `g`.
    pub fn g_sample_set(&self, g: usize) -> Result<VnSet> {
        if g < 4 || g % 2 != 0 {
            return invalid(format!("sample-set length must be even and at least 4, got {g}"));
        }
        if g > self.g_c {
            return invalid(format!("cover sets only reach length {}; cannot form a {g}-sample set", self.g_c - 2));
        }
        Ok(self.cover(g - 2).map(CoverSet::to_set).unwrap_or_default())
    }

    /// Strategy-1 sample set of size `s` using recorded touch counts.
    pub fn greedy_sample_set(&self, s: usize) -> Result<VnSet> {
        self.greedy_sample_set_ranked(s, TouchRanking::Recorded)
    }

    /// Strategy-1 sample set: the smallest level `g` whose cover exceeds `s`
    /// contributes `C_{g-2}` plus its best-ranked new VNs. If no cover exceeds
    /// `s`, the largest cover is padded with uniformly drawn VNs.
    pub fn greedy_sample_set_ranked(&self, s: usize, ranking: TouchRanking<'_>) -> Result<VnSet> {
        if s == 0 {
            return invalid("sample size must be at least 1");
        }
        if s > self.n {
            return invalid(format!("sample size {s} exceeds the {} VNs", self.n));
        }
        if let Some(level) = self.covers.iter().find(|c| c.len() > s) {
            let base = self.cover(level.g - 2).map(CoverSet::to_set).unwrap_or_default();
            let need = s - base.len();
            let mut added: Vec<(usize, u64)> = level.added().iter().map(|e| (e.vn, e.touches)).collect();
            if let TouchRanking::OriginalGraph(graph) = ranking {
                let census = enumerate_cycles_unbounded(graph, level.g)?;
                let touches = census.touches(level.g)?;
                for a in added.iter_mut() {
                    a.1 = touches[a.0];
                }
            }
            // stable: equal counts keep insertion order
            added.sort_by(|a, b| b.1.cmp(&a.1));
            return Ok(base.iter().chain(added.iter().take(need).map(|a| a.0)).collect());
        }
        let base = self.covers.last().map(CoverSet::to_set).unwrap_or_default();
        let mut unused: Vec<usize> = (0..self.n).filter(|&v| !base.contains(v)).collect();
        let mut rng = rng::stream(self.seed, Stream::Padding);
        unused.shuffle(&mut rng);
        let need = s - base.len();
        Ok(base.iter().chain(unused.into_iter().take(need)).collect())
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Member {
            vn: usize,
            touches: u64,
            inherited: bool,
        }
        #[derive(Serialize)]
        struct Level {
            g: usize,
            size: usize,
            members: Vec<Member>,
        }
        #[derive(Serialize)]
        struct Export {
            n: usize,
            g_min: Girth,
            g_c: usize,
            seed: u64,
            covers: Vec<Level>,
        }
        let export = Export {
            n: self.n,
            g_min: self.g_min,
            g_c: self.g_c,
            seed: self.seed,
            covers: self
                .covers
                .iter()
                .map(|c| Level {
                    g: c.g,
                    size: c.len(),
                    members: c
                        .members
                        .iter()
                        .enumerate()
                        .map(|(i, e)| Member {
                            vn: e.vn + 1,
                            touches: e.touches,
                            inherited: i < c.inherited,
                        })
                        .collect(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&export)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peg::build_peg;
    use crate::tanner::avoids_short_cycles;

    fn family(n: usize, covers: Vec<(usize, Vec<(usize, u64)>, usize)>) -> SampleSetFamily {
        SampleSetFamily {
            n,
            g_min: Girth::Finite(covers.first().map_or(10, |c| c.0)),
            g_c: 10,
            seed: 0,
            covers: covers
                .into_iter()
                .map(|(g, m, inherited)| CoverSet {
                    g,
                    members: m.into_iter().map(|(vn, touches)| CoverEntry { vn, touches }).collect(),
                    inherited,
                })
                .collect(),
        }
    }

    #[test]
    fn single_four_cycle_needs_one_vn() {
        let g = TannerGraph::from_edges(3, 3, [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]).unwrap();
        let mut seen = [false; 2];
        for seed in 0..16 {
            let f = greedy_cover_sets(&g, 8, seed).unwrap();
            let c4 = f.cover(4).unwrap().to_set();
            assert!(c4 == VnSet::new([0]) || c4 == VnSet::new([1]));
            seen[c4.as_slice()[0]] = true;
            assert_eq!(f.cover(6).unwrap().to_set(), c4);
            assert_eq!(f.g_sample_set(6).unwrap(), c4);
            assert_eq!(f.g_sample_set(4).unwrap(), VnSet::empty());
        }
        assert_eq!(seen, [true, true]);
    }

    #[test]
    fn disjoint_four_cycles_need_two() {
        let g = TannerGraph::from_edges(
            4,
            4,
            [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)],
        )
        .unwrap();
        let f = greedy_cover_sets(&g, 6, 1).unwrap();
        // brute-force minimum vertex cover of the two cycles
        let cycles = [VnSet::new([0, 1]), VnSet::new([2, 3])];
        let min_cover = (0u32..16)
            .filter(|mask| {
                let s: VnSet = (0..4).filter(|v| mask >> v & 1 == 1).collect();
                cycles.iter().all(|c| c.intersects(&s))
            })
            .map(u32::count_ones)
            .min()
            .unwrap();
        assert_eq!(f.cover(4).unwrap().len(), min_cover as usize);
        assert_eq!(min_cover, 2);
    }

    #[test]
    fn acyclic_graph_gives_empty_family() {
        let g = TannerGraph::from_edges(3, 2, [(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap();
        let f = greedy_cover_sets(&g, 10, 3).unwrap();
        assert!(f.covers().is_empty());
        assert_eq!(f.g_sample_set(10).unwrap(), VnSet::empty());
        assert_eq!(f.g_sample_set(6).unwrap(), VnSet::empty());
        assert!(f.g_sample_set(12).is_err());
        assert!(f.g_sample_set(7).is_err());
        let padded = f.greedy_sample_set(2).unwrap();
        assert_eq!(padded.len(), 2);
        assert!(f.greedy_sample_set(4).is_err());
        assert!(f.greedy_sample_set(0).is_err());
    }

    #[test]
    fn strategy_takes_prefix_of_next_level() {
        let f = family(
            10,
            vec![
                (4, vec![(3, 5), (7, 2)], 0),
                (6, vec![(3, 5), (7, 2), (1, 9), (4, 6), (0, 6)], 2),
                (8, vec![(3, 5), (7, 2), (1, 9), (4, 6), (0, 6), (9, 1)], 5),
            ],
        );
        assert_eq!(f.greedy_sample_set(3).unwrap(), VnSet::new([3, 7, 1]));
        assert_eq!(f.greedy_sample_set(4).unwrap(), VnSet::new([3, 7, 1, 4]));
        // s = 1: best recorded VN of the first level
        assert_eq!(f.greedy_sample_set(1).unwrap(), VnSet::new([3]));
        assert_eq!(f.greedy_sample_set(2).unwrap(), VnSet::new([3, 7]));
        let s6 = f.greedy_sample_set(6).unwrap();
        assert!(f.g_sample_set(10).unwrap().is_subset(&s6));
        let s8 = f.greedy_sample_set(8).unwrap();
        assert_eq!(s8.len(), 8);
        assert!(s6.is_subset(&s8));
    }

    #[test]
    fn covers_break_short_cycles_and_nest() {
        for seed in 0..3 {
            let g = build_peg(48, 24, 3, seed).unwrap();
            let f = greedy_cover_sets(&g, 10, seed).unwrap();
            assert_eq!(f.covers().first().map(|c| c.g), g.girth().finite().filter(|&x| x < 10));
            for w in f.covers().windows(2) {
                assert!(w[0].to_set().is_subset(&w[1].to_set()));
                assert_eq!(w[1].inherited, w[0].len());
            }
            for c in f.covers() {
                assert!(avoids_short_cycles(&g, &c.to_set(), c.g + 2).unwrap());
                // recorded counts never increase within a level
                for w in c.added().windows(2) {
                    assert!(w[0].touches >= w[1].touches);
                }
            }
            assert!(avoids_short_cycles(&g, &f.g_sample_set(10).unwrap(), 10).unwrap());
            // same tier, growing s: nested
            for s in 1..f.n() {
                let a = f.greedy_sample_set(s).unwrap();
                let b = f.greedy_sample_set(s + 1).unwrap();
                assert_eq!(a.len(), s);
                let tier = |s: usize| f.covers().iter().position(|c| c.len() > s);
                if tier(s) == tier(s + 1) {
                    assert!(a.is_subset(&b), "s={s}");
                }
            }
        }
    }

    #[test]
    fn original_graph_ranking_is_available() {
        let g = build_peg(40, 20, 3, 2).unwrap();
        let f = greedy_cover_sets(&g, 10, 2).unwrap();
        let a = f.greedy_sample_set_ranked(3, TouchRanking::OriginalGraph(&g)).unwrap();
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn json_is_one_based() {
        let g = TannerGraph::from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let f = greedy_cover_sets(&g, 6, 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&f.to_json().unwrap()).unwrap();
        let vn = v["covers"][0]["members"][0]["vn"].as_u64().unwrap();
        assert!(vn == 1 || vn == 2);
        assert_eq!(v["g_min"]["finite"], 4);
    }
}
