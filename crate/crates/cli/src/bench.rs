//! Benchmark grid runner: one CSV row per (instance, algorithm) cell plus a
//! per-point median summary.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use csg::oracle::MAX_PARTITION_AGENTS;
use csg::solver::DEFAULT_DENSE_LIMIT;
use csg::{generate, solve, Algorithm, CsgError, GraphModel, GraphSpec, SeededRandom, SolveOptions};

/// Inclusive agent-count range, written `a..b` or just `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub lo: usize,
    pub hi: usize,
}

impl FromStr for NRange {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .with_context(|| format!("bad size {t:?} in range {s:?}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => (num(s)?, num(s)?),
        };
        if lo == 0 || lo > hi {
            bail!("empty or invalid size range {s:?}");
        }
        Ok(NRange { lo, hi })
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub models: Vec<GraphModel>,
    pub sizes: NRange,
    pub seeds: u64,
    /// Added to each seed index; graph and value seeds coincide.
    pub base_seed: u64,
    pub algs: Vec<Algorithm>,
    pub timeout: Option<Duration>,
    /// Worker threads; `None` uses all cores.
    pub jobs: Option<usize>,
}

/// One CSV row. Counter, time and value fields are empty for timed-out runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub model: String,
    pub n: usize,
    pub seed: u64,
    pub alg: String,
    pub subproblems: Option<u64>,
    pub subspaces: Option<u64>,
    pub elapsed_ms: Option<f64>,
    pub value: Option<f64>,
    pub timeout: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MedianRow {
    pub model: String,
    pub n: usize,
    pub alg: String,
    pub runs: usize,
    pub timeouts: usize,
    pub median_subproblems: Option<f64>,
    pub median_subspaces: Option<f64>,
    pub median_elapsed_ms: Option<f64>,
}

/// Largest instance each algorithm accepts, if bounded.
pub fn size_limit(alg: Algorithm) -> Option<usize> {
    match alg {
        Algorithm::Dp | Algorithm::Idp => Some(DEFAULT_DENSE_LIMIT),
        Algorithm::BruteForce => Some(MAX_PARTITION_AGENTS),
        Algorithm::Dype | Algorithm::Dyce => None,
    }
}

fn check(cfg: &BenchConfig) -> Result<()> {
    if cfg.models.is_empty() || cfg.algs.is_empty() {
        bail!("at least one model and one algorithm are required");
    }
    for &alg in &cfg.algs {
        if let Some(limit) = size_limit(alg) {
            if cfg.sizes.hi > limit {
                bail!("{alg} is limited to n <= {limit}; requested sizes {}", cfg.sizes);
            }
        }
    }
    for &model in &cfg.models {
        for n in cfg.sizes.lo..=cfg.sizes.hi {
            GraphSpec::new(model, n, 0)
                .validate()
                .with_context(|| format!("model {model} at n = {n}"))?;
        }
    }
    Ok(())
}

fn run_cell(model: GraphModel, n: usize, seed: u64, alg: Algorithm, timeout: Option<Duration>) -> Result<BenchRow> {
    let g = generate(&GraphSpec::new(model, n, seed))?;
    let opts = match timeout {
        Some(t) => SolveOptions::with_timeout(t),
        None => SolveOptions::default(),
    };
    let mut row = BenchRow {
        model: model.to_string(),
        n,
        seed,
        alg: alg.name().to_string(),
        subproblems: None,
        subspaces: None,
        elapsed_ms: None,
        value: None,
        timeout: false,
    };
    match solve(alg, &g, &SeededRandom::new(seed), None, &opts) {
        Ok(r) => {
            row.subproblems = Some(r.subproblems_stored);
            row.subspaces = Some(r.subspaces_evaluated);
            row.elapsed_ms = Some(r.elapsed.as_secs_f64() * 1e3);
            row.value = Some(r.optimal_value);
        }
        Err(CsgError::Timeout) => row.timeout = true,
        Err(e) => return Err(e).with_context(|| format!("{alg} on {model} n={n} seed={seed}")),
    }
    Ok(row)
}

/// Runs every cell of the grid. Rows come back in grid order
/// (model, n, seed, algorithm) regardless of scheduling.
pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    check(cfg)?;
    let mut cells = Vec::new();
    for &model in &cfg.models {
        for n in cfg.sizes.lo..=cfg.sizes.hi {
            for i in 0..cfg.seeds {
                for &alg in &cfg.algs {
                    cells.push((model, n, cfg.base_seed.wrapping_add(i), alg));
                }
            }
        }
    }
    let work = || -> Result<Vec<BenchRow>> {
        cells
            .par_iter()
            .map(|&(model, n, seed, alg)| run_cell(model, n, seed, alg, cfg.timeout))
            .collect()
    };
    match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()?
            .install(work),
        None => work(),
    }
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    Some(if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    })
}

/// Medians over the completed runs of each (model, n, algorithm) point.
pub fn medians(rows: &[BenchRow]) -> Vec<MedianRow> {
    let mut keys: Vec<(&str, usize, &str)> = Vec::new();
    for r in rows {
        let k = (r.model.as_str(), r.n, r.alg.as_str());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(model, n, alg)| {
            let point: Vec<&BenchRow> = rows
                .iter()
                .filter(|r| r.model == model && r.n == n && r.alg == alg)
                .collect();
            let done: Vec<&&BenchRow> = point.iter().filter(|r| !r.timeout).collect();
            MedianRow {
                model: model.to_string(),
                n,
                alg: alg.to_string(),
                runs: point.len(),
                timeouts: point.len() - done.len(),
                median_subproblems: median(done.iter().filter_map(|r| r.subproblems).map(|x| x as f64).collect()),
                median_subspaces: median(done.iter().filter_map(|r| r.subspaces).map(|x| x as f64).collect()),
                median_elapsed_ms: median(done.iter().filter_map(|r| r.elapsed_ms).collect()),
            }
        })
        .collect()
}

fn write_rows<T: Serialize>(out: impl Write, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(out: impl Write, rows: &[BenchRow]) -> Result<()> {
    write_rows(out, rows)
}

pub fn write_medians_csv(out: impl Write, rows: &[MedianRow]) -> Result<()> {
    write_rows(out, rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<BenchRow>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// `runs.csv` → `runs.medians.csv`
pub fn medians_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "bench".into());
    out.with_file_name(format!("{stem}.medians.csv"))
}
