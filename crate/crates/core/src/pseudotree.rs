//! Edge-traversal pseudotrees built by depth-first search, and the agent
//! ordering they induce.
//!
//! Every synergy edge of a DFS tree joins an ancestor and a descendant, so
//! the preorder (root first) places each agent after all of its ancestors.
//! Positions are 1-based: the root sits at position 1.

use std::fmt::Write as _;

use crate::agentset::AgentSet;
use crate::error::{CsgError, Result};
use crate::graph::SynergyGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pseudotree {
    n: usize,
    root: usize,
    parent: Vec<Option<usize>>,
    ordering: Vec<usize>,
    /// 1-based position per agent; 0 for agents outside the tree.
    position: Vec<usize>,
}

/// Maximum-degree agent, lowest index on ties.
pub fn default_root(g: &SynergyGraph) -> usize {
    default_root_among(g, 0..g.n())
}

pub(crate) fn default_root_among(g: &SynergyGraph, agents: impl IntoIterator<Item = usize>) -> usize {
    let mut best: Option<usize> = None;
    for a in agents {
        if best.is_none_or(|b| g.degree(a) > g.degree(b)) {
            best = Some(a);
        }
    }
    best.unwrap_or(0)
}

impl Pseudotree {
    /// DFS pseudotree of a connected graph. Children are visited in
    /// ascending agent index.
    pub fn build(g: &SynergyGraph, root: usize) -> Result<Self> {
        let pt = Self::build_component(g, root)?;
        if pt.len() != g.n() {
            return Err(CsgError::Disconnected);
        }
        Ok(pt)
    }

    /// DFS pseudotree spanning only the connected component of `root`.
    pub fn build_component(g: &SynergyGraph, root: usize) -> Result<Self> {
        let n = g.n();
        if root >= n {
            return Err(CsgError::AgentOutOfRange { agent: root, n });
        }
        let mut parent = vec![None; n];
        let mut position = vec![0; n];
        let mut ordering = vec![root];
        position[root] = 1;
        // (agent, index of the next neighbor to try)
        let mut stack = vec![(root, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (u, next) = *top;
            match g.neighbors(u)[next..].iter().position(|&v| position[v] == 0) {
                Some(offset) => {
                    let v = g.neighbors(u)[next + offset];
                    top.1 = next + offset + 1;
                    parent[v] = Some(u);
                    ordering.push(v);
                    position[v] = ordering.len();
                    stack.push((v, 0));
                }
                None => {
                    stack.pop();
                }
            }
        }
        Ok(Pseudotree {
            n,
            root,
            parent,
            ordering,
            position,
        })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Number of agents in the tree.
    pub fn len(&self) -> usize {
        self.ordering.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordering.is_empty()
    }

    /// Size of the agent universe the tree was built over.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn parent(&self, agent: usize) -> Option<usize> {
        self.parent.get(agent).copied().flatten()
    }

    /// Agents in preorder.
    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    pub fn position(&self, agent: usize) -> Option<usize> {
        self.position.get(agent).copied().filter(|&p| p > 0)
    }

    /// The agent at 1-based position `pos`.
    pub fn agent_at(&self, pos: usize) -> usize {
        self.ordering[pos - 1]
    }

    pub fn contains(&self, agent: usize) -> bool {
        self.position(agent).is_some()
    }

    pub fn is_ancestor(&self, ancestor: usize, mut agent: usize) -> bool {
        while let Some(p) = self.parent(agent) {
            if p == ancestor {
                return true;
            }
            agent = p;
        }
        false
    }

    /// Minimum position over the members of `c`.
    pub fn coalition_order<S: AgentSet>(&self, c: &S) -> Result<usize> {
        let mut best = None;
        for a in c.iter() {
            let p = self.position(a).ok_or(CsgError::AgentOutOfRange {
                agent: a,
                n: self.len(),
            })?;
            best = Some(best.map_or(p, |b: usize| b.min(p)));
        }
        best.ok_or(CsgError::EmptyCoalition)
    }

    /// The member of `c` with the lowest position.
    pub fn lowest_agent<S: AgentSet>(&self, c: &S) -> Result<usize> {
        self.coalition_order(c).map(|p| self.agent_at(p))
    }

    /// Agents at positions `k..=len`.
    pub fn suffix_agents<S: AgentSet>(&self, k: usize) -> S {
        S::from_members(self.n, self.ordering[k.max(1) - 1..].iter().copied())
    }

    /// Agents covered by the tree.
    pub fn agents<S: AgentSet>(&self) -> S {
        self.suffix_agents(1)
    }

    /// Checks the tree against `g`: tree edges are graph edges, the order is
    /// a preorder, and every graph edge inside the tree joins an ancestor and
    /// a descendant.
    pub fn validate(&self, g: &SynergyGraph) -> Result<()> {
        let bad = |msg: String| Err(CsgError::InvalidPseudotree(msg));
        if self.n != g.n() {
            return bad(format!("universe {} vs graph {}", self.n, g.n()));
        }
        for &a in &self.ordering {
            if let Some(p) = self.parent(a) {
                if !g.has_edge(a, p) {
                    return bad(format!("tree edge ({a}, {p}) is not a graph edge"));
                }
                if self.position(p) >= self.position(a) {
                    return bad(format!("agent {a} precedes its parent {p}"));
                }
            } else if a != self.root {
                return bad(format!("agent {a} has no parent"));
            }
        }
        for &(u, v) in g.edges() {
            if self.contains(u) != self.contains(v) {
                return bad(format!("edge ({u}, {v}) leaves the tree"));
            }
            if self.contains(u) && !self.is_ancestor(u, v) && !self.is_ancestor(v, u) {
                return bad(format!("edge ({u}, {v}) crosses branches"));
            }
        }
        Ok(())
    }

    /// Text dump, one agent per line in preorder: `agent parent position`,
    /// with `-` for the root's parent.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, &a) in self.ordering.iter().enumerate() {
            let parent = self.parent(a).map_or("-".to_string(), |p| p.to_string());
            let _ = writeln!(out, "{a} {parent} {}", i + 1);
        }
        out
    }
}
