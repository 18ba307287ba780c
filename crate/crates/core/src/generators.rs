//! Seeded synergy-graph generators for the benchmark graph classes.
//!
//! Randomness comes from SplitMix64 with its published constants, so the
//! same `(model, n, seed)` produces the same edge set on every platform and
//! can be reproduced from any language.

use std::fmt;
use std::str::FromStr;

use crate::error::{CsgError, Result};
use crate::graph::SynergyGraph;
use crate::valuation::splitmix64_finalize;

/// SplitMix64 stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        splitmix64_finalize(self.state)
    }

    /// Uniform integer in `0..bound` by rejection (no modulo bias).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.below(bound as u64) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphModel {
    /// Uniform labeled tree (Prüfer decoding).
    RandomTree,
    /// Random attachment tree with every degree at most `d`.
    BoundedTree(usize),
    /// Preferential attachment from a `k`-clique, `k` distinct targets per node.
    BarabasiAlbert(usize),
    Complete,
    Path,
}

impl GraphModel {
    pub fn is_tree(self) -> bool {
        matches!(
            self,
            GraphModel::RandomTree | GraphModel::BoundedTree(_) | GraphModel::Path
        )
    }
}

impl fmt::Display for GraphModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphModel::RandomTree => f.write_str("tree"),
            GraphModel::BoundedTree(d) => write!(f, "btree:{d}"),
            GraphModel::BarabasiAlbert(k) => write!(f, "ba:{k}"),
            GraphModel::Complete => f.write_str("complete"),
            GraphModel::Path => f.write_str("path"),
        }
    }
}

impl FromStr for GraphModel {
    type Err = CsgError;

    /// `tree | btree:<d> | ba:<k> | complete | path`
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let param = |tok: &str| {
            tok.parse::<usize>()
                .map_err(|_| CsgError::Parse(format!("bad model parameter {tok:?} in {text:?}")))
        };
        match text.split_once(':') {
            None => match text {
                "tree" => Ok(GraphModel::RandomTree),
                "complete" => Ok(GraphModel::Complete),
                "path" => Ok(GraphModel::Path),
                other => Err(CsgError::Parse(format!("unknown graph model {other:?}"))),
            },
            Some(("btree", d)) => Ok(GraphModel::BoundedTree(param(d)?)),
            Some(("ba", k)) => Ok(GraphModel::BarabasiAlbert(param(k)?)),
            Some((other, _)) => Err(CsgError::Parse(format!("unknown graph model {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GraphSpec {
    pub model: GraphModel,
    pub n: usize,
    pub seed: u64,
}

impl GraphSpec {
    pub fn new(model: GraphModel, n: usize, seed: u64) -> Self {
        GraphSpec { model, n, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(CsgError::InvalidSpec("n must be at least 1".into()));
        }
        match self.model {
            GraphModel::BoundedTree(d) if d < 2 && self.n > 2 => Err(CsgError::InvalidSpec(format!(
                "a tree on {} agents cannot have maximum degree {d}",
                self.n
            ))),
            GraphModel::BoundedTree(0) if self.n == 2 => {
                Err(CsgError::InvalidSpec("a tree on 2 agents needs degree 1".into()))
            }
            GraphModel::BarabasiAlbert(k) if k == 0 || k >= self.n => Err(CsgError::InvalidSpec(format!(
                "ba:{k} requires 1 <= k < n (n = {})",
                self.n
            ))),
            _ => Ok(()),
        }
    }
}

/// Builds the graph described by `spec`; deterministic in `(model, n, seed)`.
pub fn generate(spec: &GraphSpec) -> Result<SynergyGraph> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = SplitMix64::new(spec.seed);
    let edges = match spec.model {
        GraphModel::Complete => return Ok(SynergyGraph::complete(n)),
        GraphModel::Path => return Ok(SynergyGraph::path(n)),
        GraphModel::RandomTree => prufer_tree(n, &mut rng),
        GraphModel::BoundedTree(d) => bounded_tree(n, d, &mut rng),
        GraphModel::BarabasiAlbert(k) => barabasi_albert(n, k, &mut rng),
    };
    SynergyGraph::new(n, edges)
}

fn prufer_tree(n: usize, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.index(n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = leaves.pop_first().expect("a Prüfer step always has a leaf");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let last: Vec<usize> = leaves.into_iter().collect();
    edges.push((last[0], last[1]));
    edges
}

fn bounded_tree(n: usize, d: usize, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    let mut degree = vec![0usize; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        // Some earlier node always has spare capacity: a tree has leaves.
        let target = loop {
            let t = rng.index(v);
            if degree[t] < d {
                break t;
            }
        };
        degree[target] += 1;
        degree[v] += 1;
        edges.push((target, v));
    }
    edges
}

fn barabasi_albert(n: usize, k: usize, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    // Each endpoint occurrence, so a uniform draw is degree-proportional.
    let mut endpoints: Vec<usize> = Vec::new();
    for u in 0..k {
        for v in u + 1..k {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    for v in k..n {
        let mut targets: Vec<usize> = Vec::with_capacity(k);
        while targets.len() < k {
            // Degree-proportional unless every existing node is isolated.
            let t = if endpoints.is_empty() {
                rng.index(v)
            } else {
                endpoints[rng.index(endpoints.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 1234567 from the reference implementation.
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
    }

    #[test]
    fn deterministic_models() {
        assert_eq!(
            generate(&GraphSpec::new(GraphModel::Complete, 3, 9)).unwrap(),
            SynergyGraph::complete(3)
        );
        let p = generate(&GraphSpec::new(GraphModel::Path, 4, 0)).unwrap();
        assert_eq!(p.edges(), &[(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn random_tree_shape() {
        let g = generate(&GraphSpec::new(GraphModel::RandomTree, 10, 5)).unwrap();
        assert_eq!(g.edge_count(), 9);
        assert!(g.is_tree());
        for n in 1..=3 {
            assert!(generate(&GraphSpec::new(GraphModel::RandomTree, n, 1))
                .unwrap()
                .is_tree());
        }
    }

    #[test]
    fn parse_models() {
        assert_eq!("ba:2".parse::<GraphModel>(), Ok(GraphModel::BarabasiAlbert(2)));
        assert_eq!("btree:3".parse::<GraphModel>(), Ok(GraphModel::BoundedTree(3)));
        assert_eq!("tree".parse::<GraphModel>(), Ok(GraphModel::RandomTree));
        assert_eq!("complete".parse::<GraphModel>(), Ok(GraphModel::Complete));
        assert_eq!("path".parse::<GraphModel>(), Ok(GraphModel::Path));
        let err = "xyz".parse::<GraphModel>().unwrap_err();
        assert!(err.to_string().contains("xyz"));
        assert!("ba:x".parse::<GraphModel>().is_err());
        for m in ["tree", "btree:4", "ba:1", "complete", "path"] {
            assert_eq!(m.parse::<GraphModel>().unwrap().to_string(), m);
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(generate(&GraphSpec::new(GraphModel::BarabasiAlbert(5), 5, 0)).is_err());
        assert!(generate(&GraphSpec::new(GraphModel::BarabasiAlbert(0), 5, 0)).is_err());
        assert!(generate(&GraphSpec::new(GraphModel::BoundedTree(1), 5, 0)).is_err());
        assert!(generate(&GraphSpec::new(GraphModel::Path, 0, 0)).is_err());
    }

    #[test]
    fn ba_shape() {
        for k in 1..=3 {
            let g = generate(&GraphSpec::new(GraphModel::BarabasiAlbert(k), 20, 3)).unwrap();
            assert!(g.is_connected());
            assert_eq!(g.edge_count(), k * (k - 1) / 2 + (20 - k) * k);
        }
    }

    #[test]
    fn bounded_degree_two_is_a_path() {
        for seed in 0..20 {
            let g = generate(&GraphSpec::new(GraphModel::BoundedTree(2), 30, seed)).unwrap();
            assert!(g.is_tree());
            assert!((0..30).all(|a| g.degree(a) <= 2));
        }
    }

    proptest! {
        #[test]
        fn trees_are_trees(n in 1usize..60, seed in any::<u64>(), d in 2usize..5) {
            for model in [GraphModel::RandomTree, GraphModel::BoundedTree(d), GraphModel::Path] {
                let g = generate(&GraphSpec::new(model, n, seed)).unwrap();
                prop_assert!(g.is_tree());
                prop_assert_eq!(g.edge_count(), n - 1);
            }
            let g = generate(&GraphSpec::new(GraphModel::BoundedTree(d), n, seed)).unwrap();
            prop_assert!((0..n).all(|a| g.degree(a) <= d));
        }

        #[test]
        fn same_seed_same_graph(n in 2usize..40, seed in any::<u64>()) {
            for model in [GraphModel::RandomTree, GraphModel::BoundedTree(3), GraphModel::BarabasiAlbert(1)] {
                let spec = GraphSpec::new(model, n, seed);
                prop_assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
            }
        }
    }
}
