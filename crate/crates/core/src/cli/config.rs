//! Run configuration shared by the subcommands, loaded from TOML or JSON and
//! overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stopsets::DEFAULT_WORK_BUDGET;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Peg,
    Ecpeg,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Peg => "peg",
            Algo::Ecpeg => "ecpeg",
        }
    }
}

/// Which touch counts rank the new VNs of a cover level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Ranking {
    Recorded,
    Original,
}

/// Every knob a command may read. Unset fields fall back to defaults when
/// resolved.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algo: Option<Algo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", alias = "dv")]
    pub d_v: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", alias = "gc")]
    pub g_c: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Ranking>,
}

pub const DEFAULT_G_C: usize = 10;
pub const DEFAULT_MU_MAX: usize = 8;

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunConfig {
    /// Reads a TOML or JSON config. A manifest written by `analyze` is
    /// accepted too; its `config` entry is used.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        if is_json {
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let inner = match value.get("config") {
                Some(c) if value.get("tool").is_some() => c.clone(),
                _ => value,
            };
            serde_json::from_value(inner).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        } else {
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        }
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(mut self, other: &RunConfig) -> RunConfig {
        overlay!(self, other, algo, n, m, rate, d_v, g_c, seed, seeds, code, mu_max, s_min, s_max, s_step, trials, budget, ranking);
        self
    }

    fn need<T: Clone>(v: &Option<T>, what: &str) -> Result<T> {
        v.clone().ok_or_else(|| Error::Config(format!("missing required setting `{what}`")))
    }

    pub fn n(&self) -> Result<usize> {
        Self::need(&self.n, "n")
    }

    pub fn d_v(&self) -> Result<usize> {
        Self::need(&self.d_v, "d_v")
    }

    pub fn seed(&self) -> Result<u64> {
        Self::need(&self.seed, "seed")
    }

    pub fn code(&self) -> Result<PathBuf> {
        Self::need(&self.code, "code")
    }

    pub fn g_c(&self) -> usize {
        self.g_c.unwrap_or(DEFAULT_G_C)
    }

    pub fn mu_max(&self) -> usize {
        self.mu_max.unwrap_or(DEFAULT_MU_MAX)
    }

    pub fn budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_WORK_BUDGET)
    }

    pub fn trials(&self) -> u64 {
        self.trials.unwrap_or(0)
    }

    pub fn ranking(&self) -> Ranking {
        self.ranking.unwrap_or(Ranking::Recorded)
    }

    /// CN count from `m`, or `round(n (1 - rate))`; both must agree when given.
    pub fn m(&self) -> Result<usize> {
        let n = self.n()?;
        let from_rate = match self.rate {
            Some(r) if !(0.0..1.0).contains(&r) => {
                return Err(Error::InvalidParameter(format!("rate must lie in [0, 1), got {r}")))
            }
            Some(r) => Some((n as f64 * (1.0 - r)).round() as usize),
            None => None,
        };
        match (self.m, from_rate) {
            (Some(m), Some(mr)) if m != mr => Err(Error::InvalidParameter(format!(
                "m = {m} disagrees with rate {} (which gives m = {mr})",
                self.rate.unwrap_or_default()
            ))),
            (Some(m), _) => Ok(m),
            (None, Some(mr)) => Ok(mr),
            (None, None) => Err(Error::Config("either `m` or `rate` is required".into())),
        }
    }

    /// Sample sizes `s_min, s_min + s_step, ...` up to `s_max`, where
    /// `s_max` defaults to `default_max`.
    pub fn sample_sizes(&self, default_max: usize, n: usize) -> Result<Vec<usize>> {
        let lo = self.s_min.unwrap_or(1);
        let hi = self.s_max.unwrap_or(default_max.max(lo)).min(n);
        let step = self.s_step.unwrap_or(1);
        if lo == 0 || step == 0 {
            return Err(Error::InvalidParameter("s_min and s_step must be positive".into()));
        }
        Ok((lo..=hi).step_by(step).collect())
    }
}
