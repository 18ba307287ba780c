//! DyPE: dynamic programming over a pseudotree hierarchy of the agents.
//!
//! A subproblem `P[C]` is the best partition value of agent set `C`. With
//! `i` the lowest-ordered agent of `C`, every subspace pins one connected
//! `C' ⊆ C` containing `i` and adds the subproblems of the connected
//! components of `C \ C'`:
//!
//! ```text
//! P[C] = max over connected C' ⊆ C with i ∈ C' of  v(C') + Σ_{D ∈ Φ(C \ C')} P[D]
//! ```
//!
//! Only coalitions whose complement stays connected are ever referenced, so
//! those are the only ones enumerated (plus the grand coalition). They are
//! evaluated from the last position in the ordering down to the root.

use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::agentset::{AgentSet, SmallSet, WideSet};
use crate::cse::ConnectedSets;
use crate::error::{CsgError, Result};
use crate::graph::{AdjacencySets, CoalitionStructure, SynergyGraph};
use crate::pseudotree::{default_root_among, Pseudotree};
use crate::solver::{Algorithm, Counters, SolveOptions, SolveResult, TieBreak};
use crate::valuation::{cs_value, Valuation};

/// Universes up to this size key the tables by bitmask in flat arrays.
pub const DENSE_TABLE_LIMIT: usize = 20;

enum Store<S> {
    Dense { value: Vec<f64>, best: Vec<Option<S>> },
    Sparse(FxHashMap<S, (f64, S)>),
}

/// Subproblem values `P[C]` and argmax coalitions `B[C]`.
pub struct DpTables<S> {
    store: Store<S>,
    len: usize,
}

impl<S: AgentSet> DpTables<S> {
    pub fn new(universe: usize) -> Self {
        let store = if universe <= DENSE_TABLE_LIMIT && S::MAX_UNIVERSE.is_some() {
            Store::Dense {
                value: vec![0.0; 1 << universe],
                best: vec![None; 1 << universe],
            }
        } else {
            Store::Sparse(FxHashMap::default())
        };
        DpTables { store, len: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `(P[C], B[C])` if `C` has been computed.
    pub fn get(&self, c: &S) -> Option<(f64, &S)> {
        match &self.store {
            Store::Dense { value, best } => {
                let i = c.dense_index()?;
                best.get(i)?.as_ref().map(|b| (value[i], b))
            }
            Store::Sparse(map) => map.get(c).map(|(v, b)| (*v, b)),
        }
    }

    pub fn value(&self, c: &S) -> Option<f64> {
        self.get(c).map(|(v, _)| v)
    }

    fn insert(&mut self, c: S, v: f64, b: S) {
        let fresh = match &mut self.store {
            Store::Dense { value, best } => {
                let i = c.dense_index().expect("dense tables hold single-word sets");
                value[i] = v;
                best[i].replace(b).is_none()
            }
            Store::Sparse(map) => map.insert(c, (v, b)).is_none(),
        };
        if fresh {
            self.len += 1;
        }
    }

    /// Unfolds `B[·]` from `c`: `{c}` if `B[c] = c`, otherwise `B[c]` plus the
    /// best structures of the components of `c \ B[c]`.
    pub fn best_cs(&self, adj: &AdjacencySets<S>, c: &S) -> Result<CoalitionStructure> {
        let mut parts = Vec::new();
        let mut work = vec![c.clone()];
        while let Some(sub) = work.pop() {
            let (_, best) = self
                .get(&sub)
                .ok_or_else(|| CsgError::MissingSubproblem(sub.to_vec()))?;
            work.extend(adj.components(&sub.difference(best)));
            parts.push(best.to_vec());
        }
        Ok(CoalitionStructure::new(parts))
    }
}

/// Yields DyPE's subproblems `(C, lowest agent of C)` in evaluation order:
/// positions from last to second, then the grand coalition with the root.
pub struct Subproblems<'a, S> {
    adj: &'a AdjacencySets<S>,
    pt: &'a Pseudotree,
    universe: S,
    /// Next position to open once `current` runs dry.
    next_pos: usize,
    current: Option<(usize, ConnectedSets<'a, S>)>,
    grand_done: bool,
}

impl<'a, S: AgentSet> Subproblems<'a, S> {
    pub fn new(adj: &'a AdjacencySets<S>, pt: &'a Pseudotree) -> Self {
        Subproblems {
            adj,
            pt,
            universe: pt.agents(),
            next_pos: pt.len(),
            current: None,
            grand_done: false,
        }
    }
}

impl<S: AgentSet> Iterator for Subproblems<'_, S> {
    type Item = (S, usize);

    fn next(&mut self) -> Option<(S, usize)> {
        loop {
            if let Some((agent, sets)) = &mut self.current {
                for c in sets.by_ref() {
                    if self.adj.is_feasible(&self.universe.difference(&c)) {
                        return Some((c, *agent));
                    }
                }
                self.current = None;
            }
            if self.next_pos >= 2 {
                let pos = self.next_pos;
                self.next_pos -= 1;
                let agent = self.pt.agent_at(pos);
                let ground = self.pt.suffix_agents(pos);
                let sets = ConnectedSets::new(self.adj, ground, agent).expect("agent is in its own suffix");
                self.current = Some((agent, sets));
                continue;
            }
            if !self.grand_done && !self.pt.is_empty() {
                self.grand_done = true;
                return Some((self.universe.clone(), self.pt.root()));
            }
            return None;
        }
    }
}

/// Materialized subproblem list for a connected graph.
pub fn enumerate_subproblems<S: AgentSet>(g: &SynergyGraph, pt: &Pseudotree) -> Vec<(S, usize)> {
    let adj = g.adjacency::<S>();
    Subproblems::new(&adj, pt).collect()
}

/// Best subspace of subproblem `c` pinned at `pin`.
fn evaluate<S: AgentSet, V: Valuation + ?Sized>(
    adj: &AdjacencySets<S>,
    model: &V,
    tables: &DpTables<S>,
    c: &S,
    pin: usize,
    tie_break: TieBreak,
    subspaces: &mut u64,
) -> Result<(f64, S)> {
    let mut best: Option<(f64, S)> = None;
    for sub in ConnectedSets::new(adj, c.clone(), pin)? {
        *subspaces += 1;
        debug_assert!(adj.is_feasible(&sub));
        let mut v = model.value(&sub)?;
        for comp in adj.components(&c.difference(&sub)) {
            v += tables
                .value(&comp)
                .ok_or_else(|| CsgError::MissingSubproblem(comp.to_vec()))?;
        }
        if best.as_ref().is_none_or(|(bv, _)| tie_break.improves(v, *bv)) {
            best = Some((v, sub));
        }
    }
    Ok(best.expect("the singleton {pin} is always a subspace"))
}

/// Runs the DP over the agents covered by `pt` and returns the filled tables.
pub fn dype_tables<S: AgentSet, V: Valuation + ?Sized>(
    adj: &AdjacencySets<S>,
    model: &V,
    pt: &Pseudotree,
    opts: &SolveOptions,
) -> Result<(DpTables<S>, Counters)> {
    let mut tables = DpTables::new(adj.n());
    let mut counters = Counters::default();
    for (c, pin) in Subproblems::new(adj, pt) {
        opts.check_deadline()?;
        let (v, best) = evaluate(
            adj,
            model,
            &tables,
            &c,
            pin,
            opts.tie_break,
            &mut counters.subspaces_evaluated,
        )?;
        tables.insert(c, v, best);
        counters.subproblems_stored += 1;
    }
    Ok((tables, counters))
}

/// Reconstructs the optimal structure from tables filled by [`dype_tables`].
pub fn best_cs<S: AgentSet>(tables: &DpTables<S>, g: &SynergyGraph, c: &S) -> Result<CoalitionStructure> {
    tables.best_cs(&g.adjacency(), c)
}

fn solve_trees<S: AgentSet, V: Valuation + ?Sized>(
    g: &SynergyGraph,
    model: &V,
    pts: &[Pseudotree],
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let start = Instant::now();
    let adj = g.adjacency::<S>();
    let mut counters = Counters::default();
    let mut structures = Vec::with_capacity(pts.len());
    for pt in pts {
        let (tables, c) = dype_tables(&adj, model, pt, opts)?;
        counters += c;
        let universe: S = pt.agents();
        let cs = tables.best_cs(&adj, &universe)?;
        debug_assert!({
            let p = tables.value(&universe).unwrap_or(f64::NAN);
            let direct = cs_value(g, model, &cs).unwrap_or(f64::NAN);
            (p - direct).abs() <= 1e-9 * p.abs().max(1.0)
        });
        structures.push(cs);
    }
    let optimal_cs = CoalitionStructure::merge(structures);
    let optimal_value = cs_value(g, model, &optimal_cs)?;
    let elapsed = start.elapsed();
    Ok(SolveResult {
        algorithm: Algorithm::Dype,
        n: g.n(),
        optimal_value,
        optimal_cs,
        subproblems_stored: counters.subproblems_stored,
        subspaces_evaluated: counters.subspaces_evaluated,
        elapsed,
        roots: pts.iter().map(|pt| pt.root()).collect(),
        ordering: pts.iter().flat_map(|pt| pt.ordering().iter().copied()).collect(),
    })
}

fn dispatch<V: Valuation + ?Sized>(
    g: &SynergyGraph,
    model: &V,
    pts: &[Pseudotree],
    opts: &SolveOptions,
) -> Result<SolveResult> {
    if g.n() <= 64 {
        solve_trees::<SmallSet, V>(g, model, pts, opts)
    } else {
        solve_trees::<WideSet, V>(g, model, pts, opts)
    }
}

/// Solves a connected instance with the given pseudotree ordering.
pub fn solve_dype<V: Valuation + ?Sized>(
    g: &SynergyGraph,
    model: &V,
    pt: &Pseudotree,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    if g.n() == 0 || !g.is_connected() {
        return Err(CsgError::Disconnected);
    }
    pt.validate(g)?;
    if pt.len() != g.n() {
        return Err(CsgError::Disconnected);
    }
    dispatch(g, model, std::slice::from_ref(pt), opts)
}

/// Solves any instance by running DyPE independently on each connected
/// component, each with a default-rooted pseudotree.
pub fn solve_dype_multi<V: Valuation + ?Sized>(
    g: &SynergyGraph,
    model: &V,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let pts = component_pseudotrees(g)?;
    dispatch(g, model, &pts, opts)
}

/// One default-rooted pseudotree per connected component, ordered by the
/// component's smallest agent.
pub fn component_pseudotrees(g: &SynergyGraph) -> Result<Vec<Pseudotree>> {
    let comps = g.components(&WideSet::full(g.n()));
    comps
        .iter()
        .map(|comp| Pseudotree::build_component(g, default_root_among(g, comp.iter())))
        .collect()
}
