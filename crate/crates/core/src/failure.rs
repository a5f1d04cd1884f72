//! Failure probability of a light node that samples `s` symbols while an
//! adversary hides a weight-`mu` stopping set.

use std::fmt::Write as _;

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::rng::block_stream;
use crate::stopsets::StoppingSetCatalog;
use crate::tanner::VnSet;

/// Stopping ratio of the reference `(8, 16)` ensemble.
pub const BETA_STAR: f64 = 0.064353;

/// Sample sets the exhaustive oracle may score before refusing.
pub const DEFAULT_ORACLE_BUDGET: u64 = 5_000_000;

const MC_BLOCK: u64 = 4096;

/// `(1 - mu/n)^s`: failure of `s` uniform samples with replacement.
pub fn pf_random(n: usize, mu: usize, s: u64) -> Result<f64> {
    if n == 0 {
        return invalid("n must be positive");
    }
    if mu > n {
        return invalid(format!("hidden weight {mu} exceeds n = {n}"));
    }
    Ok((1.0 - mu as f64 / n as f64).powf(s as f64))
}

/// Reference curve `(1 - beta*)^s`.
pub fn pf_beta_star(s: u64) -> f64 {
    (1.0 - BETA_STAR).powf(s as f64)
}

/// `1 - tau(sample, mu)` for a fixed sample set.
pub fn pf_greedy(catalog: &StoppingSetCatalog, sample: &VnSet, mu: usize) -> Result<f64> {
    Ok(1.0 - catalog.tau(sample, mu)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub p_f: f64,
    /// A size-`s` sample set reaching the optimum, first in lexicographic order.
    pub sample: VnSet,
}

/// Best deterministic sample set of size `s`: scans all `C(n, s)` sets and
/// returns `1 - max tau`. Mixing sample sets cannot do better, since the
/// failure of a mixture is the matching average of its columns.
pub fn pf_oracle(catalog: &StoppingSetCatalog, s: usize, mu: usize, budget: u64) -> Result<OracleResult> {
    let n = catalog.n();
    if s > n {
        return invalid(format!("sample size {s} exceeds n = {n}"));
    }
    let sets = catalog.sets(mu)?;
    let columns = binomial(n as u64, s as u64);
    if columns.is_none_or(|c| c > budget) {
        return Err(Error::BudgetExceeded { budget });
    }
    let masks: Vec<u128> = if n <= 128 { sets.iter().map(to_mask).collect() } else { Vec::new() };
    let mut best: Option<(usize, Vec<usize>)> = None;
    for combo in (0..n).combinations(s) {
        let hit = if n <= 128 {
            let m = combo.iter().fold(0u128, |acc, &v| acc | 1 << v);
            masks.iter().filter(|&&x| x & m != 0).count()
        } else {
            let sample = VnSet::new(combo.iter().copied());
            sets.iter().filter(|x| x.intersects(&sample)).count()
        };
        if best.as_ref().is_none_or(|(h, _)| hit > *h) {
            best = Some((hit, combo));
        }
    }
    let (hit, combo) = best.expect("at least one sample set");
    let p_f = if sets.is_empty() { 1.0 } else { 1.0 - hit as f64 / sets.len() as f64 };
    Ok(OracleResult {
        p_f,
        sample: VnSet::new(combo),
    })
}

/// Failure of a randomized strategy that uses `columns[j]` with probability
/// `weights[j]`.
pub fn pf_mixture(catalog: &StoppingSetCatalog, mu: usize, columns: &[VnSet], weights: &[f64]) -> Result<f64> {
    if columns.len() != weights.len() || columns.is_empty() {
        return invalid("a mixture needs one weight per sample set");
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|&w| w < 0.0) || (total - 1.0).abs() > 1e-9 {
        return invalid("mixture weights must be a probability vector");
    }
    columns
        .iter()
        .zip(weights)
        .map(|(c, &w)| Ok(w * pf_greedy(catalog, c, mu)?))
        .sum()
}

fn to_mask(set: &VnSet) -> u128 {
    set.iter().fold(0u128, |acc, v| acc | 1 << v)
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SamplingStrategy {
    /// `s` uniform draws with replacement per trial.
    Random,
    /// The same sample set every trial.
    Fixed(VnSet),
}

impl SamplingStrategy {
    pub fn label(&self) -> &'static str {
        match self {
            SamplingStrategy::Random => "random",
            SamplingStrategy::Fixed(_) => "greedy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub p_f: f64,
    pub stderr: f64,
    pub trials: u64,
    pub failures: u64,
}

/// Simulates the attack: each trial hides a uniformly chosen weight-`mu`
/// stopping set and fails when no sample lands in it. Trials run in fixed
/// blocks with their own streams, so the estimate does not depend on the
/// thread count.
pub fn monte_carlo_da(
    catalog: &StoppingSetCatalog,
    strategy: &SamplingStrategy,
    mu: usize,
    s: usize,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    let sets = catalog.sets(mu)?;
    if sets.is_empty() {
        return invalid(format!("no stopping sets of weight {mu} to hide"));
    }
    if trials == 0 {
        return invalid("trials must be at least 1");
    }
    let n = catalog.n();
    if let SamplingStrategy::Fixed(sample) = strategy {
        sample.check_within(n)?;
    }
    let masks: Vec<Vec<bool>> = sets.iter().map(|x| x.mask(n)).collect();
    let blocks = trials.div_ceil(MC_BLOCK);
    let failures: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_stream(seed, b);
            let len = MC_BLOCK.min(trials - b * MC_BLOCK);
            let mut fails = 0u64;
            for _ in 0..len {
                let hidden = &masks[rng.gen_range(0..masks.len())];
                let detected = match strategy {
                    SamplingStrategy::Random => (0..s).any(|_| hidden[rng.gen_range(0..n)]),
                    SamplingStrategy::Fixed(sample) => sample.iter().any(|v| hidden[v]),
                };
                fails += u64::from(!detected);
            }
            fails
        })
        .sum();
    let p = failures as f64 / trials as f64;
    Ok(Estimate {
        p_f: p,
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        trials,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub strategy: String,
    pub n: usize,
    pub mu: usize,
    pub s: usize,
    pub p_f: f64,
    /// Present for simulated points only.
    pub stderr: Option<f64>,
}

/// Failure probabilities of one code over a grid of `(s, mu)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FailureCurve {
    pub points: Vec<CurvePoint>,
}

impl FailureCurve {
    pub fn push(&mut self, strategy: &str, n: usize, mu: usize, s: usize, p_f: f64, stderr: Option<f64>) -> Result<()> {
        if !(0.0..=1.0).contains(&p_f) {
            return invalid(format!("failure probability {p_f} outside [0, 1]"));
        }
        self.points.push(CurvePoint {
            strategy: strategy.to_string(),
            n,
            mu,
            s,
            p_f,
            stderr,
        });
        Ok(())
    }

    /// Random, greedy and `beta*` reference points for each `mu` and `s`.
    pub fn analytic(catalog: &StoppingSetCatalog, greedy: &dyn Fn(usize) -> Result<VnSet>, mus: &[usize], ss: &[usize]) -> Result<Self> {
        let n = catalog.n();
        let mut curve = FailureCurve::default();
        for &mu in mus {
            for &s in ss {
                curve.push("random", n, mu, s, pf_random(n, mu, s as u64)?, None)?;
                curve.push("greedy", n, mu, s, pf_greedy(catalog, &greedy(s)?, mu)?, None)?;
                curve.push("beta_star", n, mu, s, pf_beta_star(s as u64), None)?;
            }
        }
        Ok(curve)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("strategy,n,mu,s,p_f,stderr\n");
        for p in &self.points {
            let _ = write!(out, "{},{},{},{},{},", p.strategy, p.n, p.mu, p.s, p.p_f);
            if let Some(e) = p.stderr {
                let _ = write!(out, "{e}");
            }
            out.push('\n');
        }
        out
    }
}
