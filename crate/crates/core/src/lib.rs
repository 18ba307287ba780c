//! Optimal coalition structure generation for graph-restricted games.
//!
//! Agents `0..n` interact through a [`SynergyGraph`]; a coalition may form
//! only if it induces a connected subgraph. The toolkit provides
//!
//! * [`dype`]: dynamic programming over a DFS pseudotree of the graph,
//! * [`baselines`]: the classic split DP, IDP and DyCE,
//! * [`oracle`]: exhaustive enumeration of feasible coalition structures,
//! * [`generators`]: seeded benchmark graphs,
//! * [`hcs`]: hierarchical coalition-structure graph export.
//!
//! ```
//! use csg::{solve_dype, Pseudotree, SeededRandom, SolveOptions, SynergyGraph};
//!
//! let g = SynergyGraph::path(3);
//! let pt = Pseudotree::build(&g, 1).unwrap();
//! let r = solve_dype(&g, &SeededRandom::new(7), &pt, &SolveOptions::default()).unwrap();
//! assert_eq!((r.subproblems_stored, r.subspaces_evaluated), (3, 6));
//! ```

pub mod agentset;
pub mod baselines;
pub mod cse;
pub mod dype;
pub mod error;
pub mod generators;
pub mod graph;
pub mod hcs;
pub mod oracle;
pub mod pseudotree;
pub mod solver;
pub mod valuation;

pub use agentset::{AgentSet, SmallSet, WideSet};
pub use baselines::{solve_dp, solve_dyce, solve_idp, BaselineTag};
pub use cse::{count_connected_sets, ConnectedSets};
pub use dype::{solve_dype, solve_dype_multi, DpTables};
pub use error::{CsgError, Result};
pub use generators::{generate, GraphModel, GraphSpec};
pub use graph::{CoalitionStructure, SynergyGraph};
pub use hcs::{build_hcs, HcsGraph};
pub use oracle::{count_two_partitions, feasible_partitions, solve_bruteforce};
pub use pseudotree::{default_root, Pseudotree};
pub use solver::{Algorithm, Counters, SolveOptions, SolveResult, TieBreak};
pub use valuation::{cs_value, EdgeSum, ExplicitTable, SeededRandom, Valuation, ValueModel};

/// Runs `algorithm` on `g`. DyPE uses a pseudotree rooted at `root` (or the
/// default root) and falls back to per-component solving when `g` is
/// disconnected.
pub fn solve<V: Valuation + ?Sized>(
    algorithm: Algorithm,
    g: &SynergyGraph,
    model: &V,
    root: Option<usize>,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    match algorithm {
        Algorithm::Dype => match root {
            Some(r) => solve_dype(g, model, &Pseudotree::build(g, r)?, opts),
            None if g.is_connected() => solve_dype(g, model, &Pseudotree::build(g, default_root(g))?, opts),
            None => solve_dype_multi(g, model, opts),
        },
        Algorithm::Dp => solve_dp(g, model, opts),
        Algorithm::Idp => solve_idp(g, model, opts),
        Algorithm::Dyce => solve_dyce(g, model, opts),
        Algorithm::BruteForce => solve_bruteforce(g, model, opts),
    }
}
