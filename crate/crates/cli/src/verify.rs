//! Cross-checks every solver against the exhaustive oracle and checks the
//! DyPE counter identities on a seeded instance stream.

use std::fmt::Write as _;

use csg::cse::count_connected_sets;
use csg::{
    count_two_partitions, cs_value, generate, solve, AgentSet, Algorithm, GraphModel, GraphSpec, SeededRandom,
    SmallSet, SolveOptions, SynergyGraph, Valuation,
};

pub const MAX_VERIFY_AGENTS: usize = 10;

const MODELS: [GraphModel; 5] = [
    GraphModel::Complete,
    GraphModel::RandomTree,
    GraphModel::BarabasiAlbert(1),
    GraphModel::BarabasiAlbert(2),
    GraphModel::Path,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub n_max: usize,
    pub instances: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: MAX_VERIFY_AGENTS,
            instances: 200,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    /// One line per instance.
    pub lines: Vec<String>,
    pub mismatches: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        if self.passed() {
            out.push_str("all checks passed\n");
        } else {
            let _ = writeln!(out, "{} mismatching instance(s)", self.mismatches);
        }
        out
    }
}

/// The `i`-th instance of the stream: cycles through the graph classes with
/// sizes spread over `2..=n_max` (at least 3 for `ba:2`).
pub fn instance(cfg: &VerifyConfig, i: usize) -> GraphSpec {
    let model = MODELS[i % MODELS.len()];
    let span = cfg.n_max.saturating_sub(1).max(1);
    let n = 2 + (i / MODELS.len()) % span;
    let n = match model {
        GraphModel::BarabasiAlbert(k) => n.max(k + 1),
        _ => n,
    };
    GraphSpec::new(model, n, cfg.seed.wrapping_add(i as u64))
}

fn identity_failures(g: &SynergyGraph, dype: (u64, u64), dp_stored: Option<u64>) -> Vec<String> {
    let n = g.n();
    let mut out = Vec::new();
    match count_two_partitions(g) {
        Ok(p2) if dype.0 != p2 + 1 => out.push(format!("dype stored {} subproblems, expected {}", dype.0, p2 + 1)),
        Err(e) => out.push(format!("two-partition count failed: {e}")),
        _ => {}
    }
    if g.is_tree() {
        let full = SmallSet::full(n);
        match count_connected_sets(g, &full, None) {
            Ok(f) if dype.1 != f => out.push(format!("dype evaluated {} subspaces on a tree, expected {f}", dype.1)),
            Err(e) => out.push(format!("connected-set count failed: {e}")),
            _ => {}
        }
    }
    if g.edge_count() == n * (n - 1) / 2 {
        if dype.0 != 1 << (n - 1) {
            out.push(format!("dype stored {} subproblems on K{n}", dype.0));
        }
        if let Some(dp) = dp_stored.filter(|&dp| dp != (1 << n) - 1) {
            out.push(format!("dp stored {dp} subproblems on K{n}"));
        }
    }
    out
}

/// Runs the suite. `values(graph, seed, algorithm)` supplies the valuation
/// each solver sees; a faithful harness returns the same one for all.
pub fn run_with<V, F>(cfg: &VerifyConfig, values: F) -> VerifyReport
where
    V: Valuation,
    F: Fn(&SynergyGraph, u64, Algorithm) -> V,
{
    let mut report = VerifyReport::default();
    let opts = SolveOptions::default();
    for i in 0..cfg.instances {
        let spec = instance(cfg, i);
        let head = format!("#{i} {} n={} seed={}", spec.model, spec.n, spec.seed);
        let g = match generate(&spec) {
            Ok(g) => g,
            Err(e) => {
                report.mismatches += 1;
                report.lines.push(format!("{head}: MISMATCH generator failed: {e}"));
                continue;
            }
        };
        let mut problems = Vec::new();
        let mut results = Vec::new();
        for alg in Algorithm::ALL {
            let model = values(&g, spec.seed, alg);
            match solve(alg, &g, &model, None, &opts) {
                Ok(r) => {
                    match cs_value(&g, &model, &r.optimal_cs) {
                        Ok(v) if v == r.optimal_value => {}
                        Ok(v) => problems.push(format!("{alg} reports {} for a structure worth {v}", r.optimal_value)),
                        Err(e) => problems.push(format!("{alg} returned an invalid structure: {e}")),
                    }
                    results.push(r);
                }
                Err(e) => problems.push(format!("{alg} failed: {e}")),
            }
        }
        let reference = results.iter().find(|r| r.algorithm == Algorithm::BruteForce);
        if let Some(oracle) = reference {
            for r in results.iter().filter(|r| r.optimal_value != oracle.optimal_value) {
                problems.push(format!(
                    "{} found {} but the optimum is {}",
                    r.algorithm, r.optimal_value, oracle.optimal_value
                ));
            }
        }
        if let Some(d) = results.iter().find(|r| r.algorithm == Algorithm::Dype) {
            let dp = results
                .iter()
                .find(|r| r.algorithm == Algorithm::Dp)
                .map(|r| r.subproblems_stored);
            problems.extend(identity_failures(&g, (d.subproblems_stored, d.subspaces_evaluated), dp));
        }
        if problems.is_empty() {
            let v = reference.map_or(f64::NAN, |r| r.optimal_value);
            report.lines.push(format!("{head}: ok (value {v})"));
        } else {
            report.mismatches += 1;
            report.lines.push(format!("{head}: MISMATCH {}", problems.join("; ")));
        }
    }
    report
}

/// The standard suite with seeded uniform values.
pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    run_with(cfg, |_, seed, _| SeededRandom::new(seed))
}
