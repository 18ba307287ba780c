//! Hierarchical coalition-structure graphs for small instances.
//!
//! Nodes are the feasible coalition structures. A coalition of a structure
//! is a frontier coalition when it is disconnected from every coalition of
//! higher order in that structure. An edge `CS -> CS'` exists when `CS'` is
//! obtained by replacing a frontier coalition `C` with a connected
//! `C' ⊆ C` of the same order plus the components of `C \ C'`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::agentset::{AgentSet, SmallSet};
use crate::cse::ConnectedSets;
use crate::error::{CsgError, Result};
use crate::graph::{CoalitionStructure, SynergyGraph};
use crate::oracle::feasible_partitions;
use crate::pseudotree::Pseudotree;

pub const MAX_HCS_AGENTS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HcsNode {
    pub structure: CoalitionStructure,
    /// Parallel to `structure.parts()`.
    pub frontier: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HcsGraph {
    pub nodes: Vec<HcsNode>,
    /// `(from, to)` node indices, ascending and duplicate-free.
    pub edges: Vec<(usize, usize)>,
}

fn frontier_flags(g: &SynergyGraph, pt: &Pseudotree, parts: &[SmallSet]) -> Result<Vec<bool>> {
    let orders: Vec<usize> = parts.iter().map(|p| pt.coalition_order(p)).collect::<Result<_>>()?;
    Ok(parts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            parts
                .iter()
                .enumerate()
                .filter(|&(j, _)| orders[j] > orders[i])
                .all(|(_, q)| !g.is_feasible(&p.union(q)))
        })
        .collect())
}

pub fn build_hcs(g: &SynergyGraph, pt: &Pseudotree) -> Result<HcsGraph> {
    let n = g.n();
    if n > MAX_HCS_AGENTS {
        return Err(CsgError::TooLarge {
            what: "HCS graph export",
            n,
            limit: MAX_HCS_AGENTS,
        });
    }
    pt.validate(g)?;
    if pt.len() != n {
        return Err(CsgError::Disconnected);
    }
    let adj = g.adjacency::<SmallSet>();
    let structures: Vec<CoalitionStructure> = feasible_partitions(g)?.collect();
    let index: HashMap<&CoalitionStructure, usize> = structures.iter().enumerate().map(|(i, cs)| (cs, i)).collect();

    let mut nodes = Vec::with_capacity(structures.len());
    let mut edges = BTreeSet::new();
    for (from, cs) in structures.iter().enumerate() {
        let parts: Vec<SmallSet> = cs
            .parts()
            .iter()
            .map(|p| SmallSet::from_members(n, p.iter().copied()))
            .collect();
        let frontier = frontier_flags(g, pt, &parts)?;
        for (i, c) in parts.iter().enumerate().filter(|&(i, _)| frontier[i]) {
            // Same order as C means containing C's lowest-ordered agent.
            let pin = pt.lowest_agent(c)?;
            for sub in ConnectedSets::new(&adj, *c, pin)? {
                if sub == *c {
                    continue;
                }
                let mut next: Vec<SmallSet> = parts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, p)| *p)
                    .collect();
                next.push(sub);
                next.extend(adj.components(&c.difference(&sub)));
                let target = CoalitionStructure::from_sets(&next);
                let to = *index
                    .get(&target)
                    .expect("expansions of feasible structures stay feasible");
                edges.insert((from, to));
            }
        }
        nodes.push(HcsNode {
            structure: cs.clone(),
            frontier,
        });
    }
    Ok(HcsGraph {
        nodes,
        edges: edges.into_iter().collect(),
    })
}

impl HcsGraph {
    /// Node label with a `*` after every frontier coalition.
    pub fn label(&self, node: usize) -> String {
        let n = &self.nodes[node];
        n.structure
            .parts()
            .iter()
            .zip(&n.frontier)
            .map(|(part, &f)| {
                let members: Vec<String> = part.iter().map(|a| a.to_string()).collect();
                format!("{{{}}}{}", members.join(","), if f { "*" } else { "" })
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph hcs {\n  node [shape=box];\n");
        for i in 0..self.nodes.len() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", self.label(i));
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}
