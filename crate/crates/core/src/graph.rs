//! Synergy graphs, feasibility, connected components and coalition structures.

use std::collections::VecDeque;

use crate::agentset::AgentSet;
use crate::error::{CsgError, Result};

/// Undirected simple graph over agents `0..n`. A coalition is feasible iff
/// the subgraph it induces is connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynergyGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl SynergyGraph {
    /// Builds a graph from an edge list. Pairs may come in either
    /// orientation; duplicates are dropped.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(CsgError::EndpointOutOfRange(u, v, n));
            }
            if u == v {
                return Err(CsgError::SelfLoop(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(SynergyGraph {
            n,
            edges: normalized,
            adj,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is well formed")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).expect("path graph is well formed")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Normalized edges `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `agent`, ascending.
    pub fn neighbors(&self, agent: usize) -> &[usize] {
        &self.adj[agent]
    }

    pub fn degree(&self, agent: usize) -> usize {
        self.adj[agent].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// All `j` in `within` adjacent to `agent`.
    pub fn neighbors_in<S: AgentSet>(&self, agent: usize, within: &S) -> S {
        let mut out = S::empty(self.n);
        for &j in &self.adj[agent] {
            if within.contains(j) {
                out.insert(j);
            }
        }
        out
    }

    /// True iff `c` is nonempty and induces a connected subgraph.
    pub fn is_feasible<S: AgentSet>(&self, c: &S) -> bool {
        match c.first() {
            None => false,
            Some(start) => self.reach_within(start, c).len() == c.len(),
        }
    }

    /// Connected components of the subgraph induced by `c`, ordered by
    /// smallest member.
    pub fn components<S: AgentSet>(&self, c: &S) -> Vec<S> {
        let mut rest = c.clone();
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let comp = self.reach_within(start, &rest);
            rest.difference_with(&comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.reach_within(0, &crate::agentset::WideSet::full(self.n)).len() == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.edges.len() == self.n - 1 && self.is_connected()
    }

    /// Breadth-first flood from `start` restricted to `within`.
    fn reach_within<S: AgentSet>(&self, start: usize, within: &S) -> S {
        let mut seen = S::singleton(self.n, start);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if within.contains(v) && !seen.contains(v) {
                    seen.insert(v);
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Per-agent neighborhoods as sets, for the solvers' hot loops.
    pub fn adjacency<S: AgentSet>(&self) -> AdjacencySets<S> {
        let neighbors = (0..self.n)
            .map(|a| S::from_members(self.n, self.adj[a].iter().copied()))
            .collect();
        AdjacencySets { n: self.n, neighbors }
    }
}

/// Neighborhoods stored as agent sets so that frontier expansion is a union
/// of words rather than a walk over adjacency lists.
#[derive(Clone, Debug)]
pub struct AdjacencySets<S> {
    n: usize,
    neighbors: Vec<S>,
}

impl<S: AgentSet> AdjacencySets<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn of(&self, agent: usize) -> &S {
        &self.neighbors[agent]
    }

    /// The component of `within` containing `start`.
    pub fn reach(&self, start: usize, within: &S) -> S {
        let mut comp = S::singleton(self.n, start);
        let mut frontier = comp.clone();
        loop {
            let mut next = S::empty(self.n);
            for u in frontier.iter() {
                next.union_with(&self.neighbors[u]);
            }
            next.intersect_with(within);
            next.difference_with(&comp);
            if next.is_empty() {
                return comp;
            }
            comp.union_with(&next);
            frontier = next;
        }
    }

    pub fn is_feasible(&self, c: &S) -> bool {
        match c.first() {
            None => false,
            Some(start) => self.reach(start, c).len() == c.len(),
        }
    }

    /// Lazily yields the components of `c` by ascending smallest member.
    pub fn components(&self, c: &S) -> Components<'_, S> {
        Components {
            adj: self,
            rest: c.clone(),
        }
    }
}

pub struct Components<'a, S> {
    adj: &'a AdjacencySets<S>,
    rest: S,
}

impl<S: AgentSet> Iterator for Components<'_, S> {
    type Item = S;

    fn next(&mut self) -> Option<S> {
        let start = self.rest.first()?;
        let comp = self.adj.reach(start, &self.rest);
        self.rest.difference_with(&comp);
        Some(comp)
    }
}

/// An exhaustive partition of the agents into disjoint nonempty coalitions.
///
/// Kept in canonical form: each part ascending, parts ordered by their
/// smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoalitionStructure {
    parts: Vec<Vec<usize>>,
}

impl CoalitionStructure {
    pub fn new(parts: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut parts: Vec<Vec<usize>> = parts
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        parts.sort_unstable();
        CoalitionStructure { parts }
    }

    pub fn from_sets<'a, S: AgentSet + 'a>(sets: impl IntoIterator<Item = &'a S>) -> Self {
        Self::new(sets.into_iter().map(|s| s.to_vec()))
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Checks that the parts are nonempty, disjoint and cover `0..n` exactly.
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for part in &self.parts {
            if part.is_empty() {
                return Err(CsgError::EmptyCoalition);
            }
            for &a in part {
                if a >= n {
                    return Err(CsgError::AgentOutOfRange { agent: a, n });
                }
                if std::mem::replace(&mut seen[a], true) {
                    return Err(CsgError::Parse(format!("agent {a} appears in two parts")));
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(a) => Err(CsgError::Parse(format!("agent {a} is not covered"))),
            None => Ok(()),
        }
    }

    /// Merges structures over disjoint agent sets.
    pub fn merge(structures: impl IntoIterator<Item = CoalitionStructure>) -> Self {
        Self::new(structures.into_iter().flat_map(|cs| cs.parts))
    }
}

impl std::fmt::Display for CoalitionStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str("{")?;
            for (j, a) in part.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}
