//! Command-line front end.

pub mod config;
pub mod pipeline;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::tanner::read_alist;
use config::{Algo, Ranking, RunConfig};
use pipeline::Artifact;

/// Exit status when an enumeration runs out of its work budget.
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "ecpeg", version, about = "Build EC-PEG / PEG LDPC codes and analyze data-availability sampling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code and write it with its ledger and metadata.
    Construct(Opts),
    /// Cycle, sample-set, stopping-set and failure analysis of a code.
    Analyze(Opts),
    /// Greedy cover sets and sample sets of a code.
    SampleSets(Opts),
    /// Stopping-set catalog and distributions of a code.
    Stopsets(Opts),
    /// Failure-probability curves of a code.
    FailureCurves(Opts),
    /// PEG against EC-PEG over several seeds.
    Compare(Opts),
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// TOML or JSON config; an analysis manifest also works. Flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Replace existing outputs.
    #[arg(long)]
    force: bool,
    #[arg(long, value_enum)]
    algo: Option<Algo>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long = "dv")]
    d_v: Option<usize>,
    #[arg(long = "gc")]
    g_c: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Seeds for `compare`, e.g. `1,2,3`.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// Input code in alist format.
    #[arg(long)]
    code: Option<PathBuf>,
    #[arg(long)]
    mu_max: Option<usize>,
    #[arg(long)]
    s_min: Option<usize>,
    #[arg(long)]
    s_max: Option<usize>,
    #[arg(long)]
    s_step: Option<usize>,
    /// Monte-Carlo trials per point; 0 skips simulation.
    #[arg(long)]
    trials: Option<u64>,
    /// Search nodes the stopping-set enumerator may visit.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum)]
    ranking: Option<Ranking>,
}

impl Opts {
    fn flags(&self) -> RunConfig {
        RunConfig {
            algo: self.algo,
            n: self.n,
            m: self.m,
            rate: self.rate,
            d_v: self.d_v,
            g_c: self.g_c,
            seed: self.seed,
            seeds: self.seeds.clone(),
            code: self.code.clone(),
            mu_max: self.mu_max,
            s_min: self.s_min,
            s_max: self.s_max,
            s_step: self.s_step,
            trials: self.trials,
            budget: self.budget,
            ranking: self.ranking,
        }
    }

    fn resolve(&self) -> Result<RunConfig> {
        let base = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        Ok(base.overlay(&self.flags()))
    }
}

/// Writes every artifact into `dir`, refusing to replace files unless `force`.
fn write_outputs(dir: &Path, artifacts: &[Artifact], force: bool) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    if !force {
        if let Some(existing) = artifacts.iter().map(|a| dir.join(a.0)).find(|p| p.exists()) {
            return Err(Error::OutputExists(existing));
        }
    }
    for (name, body) in artifacts {
        write_atomic(&dir.join(name), body.as_bytes())?;
    }
    Ok(())
}

const ANALYSIS_OUTPUTS: [&str; 6] = ["cycles.csv", "sample_sets.json", "stopsets.json", "ss.csv", "failure.csv", "manifest.json"];

/// Records a failed analysis in `error.json` and drops stale outputs.
fn write_error(dir: &Path, err: &Error, cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for name in ANALYSIS_OUTPUTS {
        let p = dir.join(name);
        if p.exists() {
            std::fs::remove_file(p)?;
        }
    }
    let kind = match err {
        Error::BudgetExceeded { .. } => "budget_exceeded",
        _ => "error",
    };
    let body = json!({ "error": kind, "message": err.to_string(), "config": cfg });
    write_atomic(&dir.join("error.json"), (serde_json::to_string_pretty(&body)? + "\n").as_bytes())
}

fn load_code(cfg: &RunConfig) -> Result<crate::tanner::TannerGraph> {
    read_alist(&cfg.code()?)
}

fn run_construct(o: &Opts) -> Result<()> {
    let cfg = o.resolve()?;
    if cfg.seed.is_none() {
        return Err(Error::InvalidParameter("construct requires --seed".into()));
    }
    let built = pipeline::construct(&cfg)?;
    let artifacts = pipeline::construct_artifacts(&cfg, &built)?;
    write_outputs(&o.out, &artifacts, o.force)?;
    println!(
        "{}: n={} m={} girth={} max CN degree={} -> {}",
        built.summary.algo,
        built.summary.n,
        built.summary.m,
        built.summary.girth,
        built.summary.max_cn_degree,
        o.out.display()
    );
    Ok(())
}

/// Runs an analysis-type command; a failure leaves only `error.json`.
fn run_analysis(o: &Opts, compute: impl FnOnce(&RunConfig) -> Result<Vec<Artifact>>) -> Result<()> {
    let cfg = o.resolve()?;
    match compute(&cfg) {
        Ok(artifacts) => {
            write_outputs(&o.out, &artifacts, o.force)?;
            for (name, _) in &artifacts {
                println!("wrote {}", o.out.join(name).display());
            }
            Ok(())
        }
        Err(e @ Error::BudgetExceeded { .. }) => {
            write_error(&o.out, &e, &cfg)?;
            Err(e)
        }
        Err(e) => Err(e),
    }
}

fn analyze(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    pipeline::analyze_artifacts(&load_code(cfg)?, cfg)
}

fn sample_sets(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let resolved = pipeline::analyze_config(cfg)?;
    let graph = load_code(&resolved)?;
    let family = pipeline::family(&graph, &resolved)?;
    let body = pipeline::sample_sets_json(&graph, &family, &resolved)?;
    Ok(vec![
        ("sample_sets.json", body),
        ("manifest.json", pipeline::manifest("sample-sets", &resolved, &["sample_sets.json"])?),
    ])
}

fn stopsets(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let resolved = pipeline::analyze_config(cfg)?;
    let graph = load_code(&resolved)?;
    let catalog = pipeline::catalog(&graph, &resolved)?;
    let census = pipeline::census(&graph, &resolved)?;
    Ok(vec![
        ("stopsets.json", catalog.to_json()? + "\n"),
        ("ss.csv", catalog.ss_csv(&pipeline::vn_order(&census))?),
        ("manifest.json", pipeline::manifest("stopsets", &resolved, &["stopsets.json", "ss.csv"])?),
    ])
}

fn failure_curves(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let resolved = pipeline::analyze_config(cfg)?;
    let graph = load_code(&resolved)?;
    let family = pipeline::family(&graph, &resolved)?;
    let catalog = pipeline::catalog(&graph, &resolved)?;
    let curve = pipeline::failure_curve(&graph, &family, &catalog, &resolved)?;
    Ok(vec![
        ("failure.csv", curve.to_csv()),
        ("manifest.json", pipeline::manifest("failure-curves", &resolved, &["failure.csv"])?),
    ])
}

pub fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Construct(o) => run_construct(o),
        Command::Analyze(o) => run_analysis(o, analyze),
        Command::SampleSets(o) => run_analysis(o, sample_sets),
        Command::Stopsets(o) => run_analysis(o, stopsets),
        Command::FailureCurves(o) => run_analysis(o, failure_curves),
        Command::Compare(o) => run_analysis(o, pipeline::compare_artifacts),
    }
}

/// Parses the process arguments, runs the command and maps errors to exit codes.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(EXIT_BUDGET),
                Error::InvalidParameter(_) | Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
