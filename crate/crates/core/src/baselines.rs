//! Reference solvers built on the classic split recurrence
//!
//! ```text
//! P[C] = max( v(C), max over two-part splits {C_k, C_l} of C of P[C_k] + P[C_l] )
//! ```
//!
//! [`solve_dp`] runs it over every subset, [`solve_idp`] adds the size-based
//! split pruning of IDP, and [`solve_dyce`] restricts it to connected
//! coalitions and splits into two connected halves.

use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::agentset::{AgentSet, SmallSet, WideSet};
use crate::cse::{all_connected_sets, ConnectedSets};
use crate::error::{CsgError, Result};
use crate::graph::{CoalitionStructure, SynergyGraph};
use crate::solver::{Algorithm, Counters, SolveOptions, SolveResult};
use crate::valuation::{cs_value, Valuation};

/// Hard ceiling for the subset-indexed tables regardless of options.
const MAX_DENSE: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaselineTag {
    Dp,
    Idp,
    Dyce,
}

impl From<BaselineTag> for Algorithm {
    fn from(tag: BaselineTag) -> Algorithm {
        match tag {
            BaselineTag::Dp => Algorithm::Dp,
            BaselineTag::Idp => Algorithm::Idp,
            BaselineTag::Dyce => Algorithm::Dyce,
        }
    }
}

pub fn solve(
    tag: BaselineTag,
    g: &SynergyGraph,
    model: &(impl Valuation + ?Sized),
    opts: &SolveOptions,
) -> Result<SolveResult> {
    match tag {
        BaselineTag::Dp => solve_dp(g, model, opts),
        BaselineTag::Idp => solve_idp(g, model, opts),
        BaselineTag::Dyce => solve_dyce(g, model, opts),
    }
}

pub fn solve_dp<V: Valuation + ?Sized>(g: &SynergyGraph, model: &V, opts: &SolveOptions) -> Result<SolveResult> {
    exhaustive(g, model, opts, false)
}

/// IDP: a split `{C_k, C_l}` with `|C_k| <= |C_l|` is evaluated only when
/// `C` is the grand coalition or `|C_l| <= n - |C|`.
pub fn solve_idp<V: Valuation + ?Sized>(g: &SynergyGraph, model: &V, opts: &SolveOptions) -> Result<SolveResult> {
    exhaustive(g, model, opts, true)
}

/// Iterates the `size`-element subsets of `0..n` in increasing mask order.
fn masks_of_size(n: usize, size: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << n;
    let mut next = Some((1u64 << size) - 1).filter(|&m| size > 0 && m < limit);
    std::iter::from_fn(move || {
        let x = next?;
        // Gosper's hack
        let c = x & x.wrapping_neg();
        let r = x + c;
        let succ = (((r ^ x) >> 2) / c) | r;
        next = Some(succ).filter(|&m| m < limit);
        Some(x)
    })
}

fn exhaustive<V: Valuation + ?Sized>(
    g: &SynergyGraph,
    model: &V,
    opts: &SolveOptions,
    idp: bool,
) -> Result<SolveResult> {
    let algorithm = if idp { Algorithm::Idp } else { Algorithm::Dp };
    let n = g.n();
    let limit = opts.dense_limit.min(MAX_DENSE);
    if n > limit {
        return Err(CsgError::TooLarge {
            what: algorithm.name(),
            n,
            limit,
        });
    }
    let start = Instant::now();
    let adj = g.adjacency::<SmallSet>();
    let size = 1usize << n;
    let mut value = vec![0.0f64; size];
    // An infeasible subset may end up with no evaluated subspace under IDP.
    let mut defined = vec![false; size];
    // 0 keeps the coalition whole; otherwise the half containing the lowest agent.
    let mut split = vec![0u64; size];
    let mut counters = Counters::default();
    let mut ticks = 0u32;

    for k in 1..=n {
        for mask in masks_of_size(n, k) {
            ticks = ticks.wrapping_add(1);
            if ticks.is_multiple_of(4096) {
                opts.check_deadline()?;
            }
            counters.subproblems_stored += 1;
            // The whole-coalition subspace; for an infeasible coalition its
            // value is -inf and is simply never read.
            counters.subspaces_evaluated += 1;
            let c = SmallSet::from_mask(mask);
            let mut best = if adj.is_feasible(&c) {
                Some(model.value(&c)?)
            } else {
                None
            };
            let mut best_split = 0;

            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            if rest != 0 {
                let mut sub = rest.wrapping_sub(1) & rest;
                loop {
                    let ck = low | sub;
                    let cl = mask ^ ck;
                    let (a, b) = (ck.count_ones() as usize, cl.count_ones() as usize);
                    let allowed = !idp || k == n || a.max(b) <= n - k;
                    if allowed && defined[ck as usize] && defined[cl as usize] {
                        counters.subspaces_evaluated += 1;
                        let v = value[ck as usize] + value[cl as usize];
                        if best.is_none_or(|bv| opts.tie_break.improves(v, bv)) {
                            best = Some(v);
                            best_split = ck;
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
            }
            if let Some(v) = best {
                value[mask as usize] = v;
                defined[mask as usize] = true;
                split[mask as usize] = best_split;
            }
        }
    }

    let mut parts = Vec::new();
    if n > 0 {
        let mut work = vec![(1u64 << n) - 1];
        while let Some(mask) = work.pop() {
            if !defined[mask as usize] {
                return Err(CsgError::MissingSubproblem(SmallSet::from_mask(mask).to_vec()));
            }
            match split[mask as usize] {
                0 => parts.push(SmallSet::from_mask(mask).to_vec()),
                ck => work.extend([ck, mask ^ ck]),
            }
        }
    }
    finish(g, model, algorithm, parts, counters, start)
}

fn finish<V: Valuation + ?Sized>(
    g: &SynergyGraph,
    model: &V,
    algorithm: Algorithm,
    parts: Vec<Vec<usize>>,
    counters: Counters,
    start: Instant,
) -> Result<SolveResult> {
    let optimal_cs = CoalitionStructure::new(parts);
    let optimal_value = cs_value(g, model, &optimal_cs)?;
    Ok(SolveResult {
        algorithm,
        n: g.n(),
        optimal_value,
        optimal_cs,
        subproblems_stored: counters.subproblems_stored,
        subspaces_evaluated: counters.subspaces_evaluated,
        elapsed: start.elapsed(),
        roots: Vec::new(),
        ordering: Vec::new(),
    })
}

/// DyCE: the split recurrence over connected coalitions only, processed by
/// increasing size. A split is evaluated only when both halves are connected.
pub fn solve_dyce<V: Valuation + ?Sized>(g: &SynergyGraph, model: &V, opts: &SolveOptions) -> Result<SolveResult> {
    if g.n() <= 64 {
        dyce::<SmallSet, V>(g, model, opts)
    } else {
        dyce::<WideSet, V>(g, model, opts)
    }
}

fn dyce<S: AgentSet, V: Valuation + ?Sized>(g: &SynergyGraph, model: &V, opts: &SolveOptions) -> Result<SolveResult> {
    let start = Instant::now();
    let n = g.n();
    let adj = g.adjacency::<S>();
    let full = S::full(n);
    let mut coalitions = all_connected_sets(&adj, &full);
    coalitions.sort_by_key(|c| c.len());

    // coalition -> (P[C], lower-agent half of the best split, if any)
    let mut table: FxHashMap<S, (f64, Option<S>)> = FxHashMap::default();
    table.reserve(coalitions.len());
    let mut counters = Counters::default();
    let lookup = |table: &FxHashMap<S, (f64, Option<S>)>, c: &S| {
        table
            .get(c)
            .map(|e| e.0)
            .ok_or_else(|| CsgError::MissingSubproblem(c.to_vec()))
    };

    for c in coalitions {
        opts.check_deadline()?;
        counters.subproblems_stored += 1;
        counters.subspaces_evaluated += 1;
        let mut best = model.value(&c)?;
        let mut best_split = None;
        let pin = c.first().expect("coalitions are nonempty");
        if c.len() > 1 {
            for ck in ConnectedSets::new(&adj, c.clone(), pin)? {
                if ck == c {
                    continue;
                }
                let cl = c.difference(&ck);
                if !adj.is_feasible(&cl) {
                    continue;
                }
                counters.subspaces_evaluated += 1;
                let v = lookup(&table, &ck)? + lookup(&table, &cl)?;
                if opts.tie_break.improves(v, best) {
                    best = v;
                    best_split = Some(ck);
                }
            }
        }
        table.insert(c, (best, best_split));
    }

    // A disconnected grand coalition decomposes into its components.
    let mut parts = Vec::new();
    let mut work: Vec<S> = adj.components(&full).collect();
    while let Some(c) = work.pop() {
        let (_, split) = table.get(&c).ok_or_else(|| CsgError::MissingSubproblem(c.to_vec()))?;
        match split {
            None => parts.push(c.to_vec()),
            Some(ck) => {
                work.push(c.difference(ck));
                work.push(ck.clone());
            }
        }
    }
    finish(g, model, Algorithm::Dyce, parts, counters, start)
}
