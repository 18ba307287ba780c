//! Connected subgraph enumeration.
//!
//! [`ConnectedSets`] yields every connected subset of a ground set that
//! contains a pinned agent, each exactly once. The search is a binary
//! include/exclude recursion over frontier vertices, unrolled onto an
//! explicit stack so callers can pull one set at a time.

use crate::agentset::AgentSet;
use crate::error::{CsgError, Result};
use crate::graph::{AdjacencySets, SynergyGraph};

struct Frame<S> {
    set: S,
    /// Agents permanently excluded below this node.
    forbidden: S,
    /// Neighbors of `set` outside `set` (not yet restricted to the ground).
    frontier: S,
}

/// Resumable iterator over the connected subsets `S` with
/// `pin ∈ S ⊆ ground`.
pub struct ConnectedSets<'a, S> {
    adj: &'a AdjacencySets<S>,
    ground: S,
    stack: Vec<Frame<S>>,
    pending: Option<S>,
}

impl<'a, S: AgentSet> ConnectedSets<'a, S> {
    pub fn new(adj: &'a AdjacencySets<S>, ground: S, pin: usize) -> Result<Self> {
        if !ground.contains(pin) {
            return Err(CsgError::PinNotInGround(pin));
        }
        let n = adj.n();
        let start = S::singleton(n, pin);
        let frontier = adj.of(pin).difference(&start);
        Ok(ConnectedSets {
            adj,
            ground,
            stack: vec![Frame {
                set: start.clone(),
                forbidden: S::empty(n),
                frontier,
            }],
            pending: Some(start),
        })
    }
}

impl<S: AgentSet> Iterator for ConnectedSets<'_, S> {
    type Item = S;

    fn next(&mut self) -> Option<S> {
        if let Some(first) = self.pending.take() {
            return Some(first);
        }
        while let Some(frame) = self.stack.pop() {
            let mut candidates = frame.frontier.intersection(&self.ground);
            candidates.difference_with(&frame.forbidden);
            let Some(v) = candidates.first() else {
                continue;
            };

            let mut grown = frame.set.clone();
            grown.insert(v);
            let mut grown_frontier = frame.frontier.union(self.adj.of(v));
            grown_frontier.difference_with(&grown);

            let mut forbidden = frame.forbidden;
            forbidden.insert(v);
            // Exclude branch below, include branch on top: depth-first.
            self.stack.push(Frame {
                set: frame.set,
                forbidden: forbidden.clone(),
                frontier: frame.frontier,
            });
            forbidden.remove(v);
            self.stack.push(Frame {
                set: grown.clone(),
                forbidden,
                frontier: grown_frontier,
            });
            return Some(grown);
        }
        None
    }
}

/// Convenience wrapper building the adjacency sets on the fly.
pub fn connected_sets_containing<S: AgentSet>(g: &SynergyGraph, ground: &S, pin: usize) -> Result<Vec<S>> {
    let adj = g.adjacency::<S>();
    Ok(ConnectedSets::new(&adj, ground.clone(), pin)?.collect())
}

/// Number of connected subsets of `ground`, containing `pin` if given.
pub fn count_connected_sets<S: AgentSet>(g: &SynergyGraph, ground: &S, pin: Option<usize>) -> Result<u64> {
    let adj = g.adjacency::<S>();
    count_with(&adj, ground, pin)
}

pub(crate) fn count_with<S: AgentSet>(adj: &AdjacencySets<S>, ground: &S, pin: Option<usize>) -> Result<u64> {
    match pin {
        Some(p) => Ok(ConnectedSets::new(adj, ground.clone(), p)?.count() as u64),
        None => {
            // Pin each agent as the smallest member in turn.
            let mut rest = ground.clone();
            let mut total = 0;
            while let Some(a) = rest.first() {
                total += ConnectedSets::new(adj, rest.clone(), a)?.count() as u64;
                rest.remove(a);
            }
            Ok(total)
        }
    }
}

/// All feasible coalitions of `g`.
pub fn all_connected_sets<S: AgentSet>(adj: &AdjacencySets<S>, ground: &S) -> Vec<S> {
    let mut rest = ground.clone();
    let mut out = Vec::new();
    while let Some(a) = rest.first() {
        out.extend(ConnectedSets::new(adj, rest.clone(), a).expect("pin is in the ground"));
        rest.remove(a);
    }
    out
}
