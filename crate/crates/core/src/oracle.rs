//! Exhaustive ground truth: every feasible coalition structure, enumerated
//! as restricted growth strings.

use std::time::Instant;

use crate::agentset::{AgentSet, SmallSet};
use crate::error::{CsgError, Result};
use crate::graph::{AdjacencySets, CoalitionStructure, SynergyGraph};
use crate::solver::{Algorithm, SolveOptions, SolveResult};
use crate::valuation::{cs_value, Valuation};

pub const MAX_PARTITION_AGENTS: usize = 14;
/// Above this size, prefixes whose blocks can no longer become connected
/// are abandoned early.
const PRUNE_ABOVE: usize = 10;
pub const MAX_TWO_PARTITION_SCAN: usize = 30;

/// Feasible partitions in lexicographic restricted-growth-string order;
/// parts come out ordered by smallest member.
pub struct FeasiblePartitions {
    n: usize,
    adj: AdjacencySets<SmallSet>,
    /// `blocks[i]` is the part index of agent `i`.
    blocks: Vec<usize>,
    started: bool,
    done: bool,
}

pub fn feasible_partitions(g: &SynergyGraph) -> Result<FeasiblePartitions> {
    let n = g.n();
    if n > MAX_PARTITION_AGENTS {
        return Err(CsgError::TooLarge {
            what: "partition enumeration",
            n,
            limit: MAX_PARTITION_AGENTS,
        });
    }
    Ok(FeasiblePartitions {
        n,
        adj: g.adjacency(),
        blocks: vec![0; n],
        started: false,
        done: n == 0,
    })
}

impl FeasiblePartitions {
    /// Advances to the next growth string differing at or before `pos`.
    fn bump(&mut self, pos: usize) -> bool {
        for i in (1..=pos).rev() {
            let max_prefix = self.blocks[..i].iter().copied().max().unwrap_or(0);
            if self.blocks[i] <= max_prefix {
                self.blocks[i] += 1;
                self.blocks[i + 1..].fill(0);
                return true;
            }
        }
        false
    }

    fn part_masks(&self, upto: usize) -> Vec<SmallSet> {
        let mut parts: Vec<SmallSet> = Vec::new();
        for (agent, &b) in self.blocks[..=upto].iter().enumerate() {
            if b == parts.len() {
                parts.push(SmallSet::empty(self.n));
            }
            parts[b].insert(agent);
        }
        parts
    }

    /// Whether every block of the prefix `0..=pos` can still be completed
    /// into a connected part using the agents after `pos`.
    fn viable(&self, pos: usize) -> bool {
        let unassigned = SmallSet::from_members(self.n, pos + 1..self.n);
        self.part_masks(pos).iter().all(|part| {
            let start = part.first().expect("parts are nonempty");
            part.is_subset(&self.adj.reach(start, &part.union(&unassigned)))
        })
    }

    /// First prefix position that can never lead to a feasible partition.
    fn first_dead_prefix(&self) -> Option<usize> {
        if self.n > PRUNE_ABOVE {
            (0..self.n - 1).find(|&pos| !self.viable(pos))
        } else {
            None
        }
    }
}

impl Iterator for FeasiblePartitions {
    type Item = CoalitionStructure;

    fn next(&mut self) -> Option<CoalitionStructure> {
        while !self.done {
            if !self.started {
                self.started = true;
            } else if !self.bump(self.n - 1) {
                self.done = true;
                break;
            }
            while let Some(pos) = self.first_dead_prefix() {
                if !self.bump(pos) {
                    self.done = true;
                    return None;
                }
            }
            if self.viable(self.n - 1) {
                return Some(CoalitionStructure::from_sets(&self.part_masks(self.n - 1)));
            }
        }
        None
    }
}

/// Exhaustive maximization over [`feasible_partitions`]; the first optimum
/// in enumeration order wins ties.
pub fn solve_bruteforce<V: Valuation + ?Sized>(
    g: &SynergyGraph,
    model: &V,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let start = Instant::now();
    let mut best: Option<(f64, CoalitionStructure)> = None;
    let mut count = 0u64;
    for cs in feasible_partitions(g)? {
        count += 1;
        if count.is_multiple_of(4096) {
            opts.check_deadline()?;
        }
        let v = cs_value(g, model, &cs)?;
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, cs));
        }
    }
    let (optimal_value, optimal_cs) = best.unwrap_or((0.0, CoalitionStructure::new(Vec::new())));
    Ok(SolveResult {
        algorithm: Algorithm::BruteForce,
        n: g.n(),
        optimal_value,
        optimal_cs,
        subproblems_stored: 0,
        subspaces_evaluated: count,
        elapsed: start.elapsed(),
        roots: Vec::new(),
        ordering: Vec::new(),
    })
}

/// Number of partitions of all agents into exactly two connected parts.
pub fn count_two_partitions(g: &SynergyGraph) -> Result<u64> {
    let n = g.n();
    if g.is_tree() {
        // Each edge removal splits a tree into two subtrees, and nothing else does.
        return Ok(g.edge_count() as u64);
    }
    if n > MAX_TWO_PARTITION_SCAN {
        return Err(CsgError::TooLarge {
            what: "two-partition scan",
            n,
            limit: MAX_TWO_PARTITION_SCAN,
        });
    }
    if n < 2 {
        return Ok(0);
    }
    let adj = g.adjacency::<SmallSet>();
    let full = (1u64 << n) - 1;
    // Fix agent 0 in the first half so each unordered split is seen once.
    let mut count = 0;
    for rest in 0..(1u64 << (n - 1)) - 1 {
        let half = rest << 1 | 1;
        if adj.is_feasible(&SmallSet::from_mask(half)) && adj.is_feasible(&SmallSet::from_mask(full ^ half)) {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::{ExplicitTable, SeededRandom};

    #[test]
    fn k3_has_five_partitions() {
        let all: Vec<_> = feasible_partitions(&SynergyGraph::complete(3)).unwrap().collect();
        let rendered: Vec<String> = all.iter().map(|cs| cs.to_string()).collect();
        assert_eq!(
            rendered,
            ["{0,1,2}", "{0,1} {2}", "{0,2} {1}", "{0} {1,2}", "{0} {1} {2}"]
        );
    }

    #[test]
    fn l3_drops_the_split_pair() {
        let all: Vec<String> = feasible_partitions(&SynergyGraph::path(3))
            .unwrap()
            .map(|cs| cs.to_string())
            .collect();
        assert_eq!(all, ["{0,1,2}", "{0,1} {2}", "{0} {1,2}", "{0} {1} {2}"]);
    }

    #[test]
    fn trivial_sizes() {
        assert_eq!(
            feasible_partitions(&SynergyGraph::new(1, []).unwrap()).unwrap().count(),
            1
        );
        assert_eq!(
            feasible_partitions(&SynergyGraph::new(0, []).unwrap()).unwrap().count(),
            0
        );
        assert!(feasible_partitions(&SynergyGraph::path(15)).is_err());
    }

    #[test]
    fn bell_numbers() {
        let bell = [1u64, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
        for (i, &b) in bell.iter().enumerate() {
            let n = i + 1;
            assert_eq!(
                feasible_partitions(&SynergyGraph::complete(n)).unwrap().count() as u64,
                b
            );
        }
    }

    #[test]
    fn pruning_matches_unpruned_count_on_paths() {
        // Feasible partitions of a path are compositions: 2^(n-1).
        for n in [9, 11, 12] {
            assert_eq!(
                feasible_partitions(&SynergyGraph::path(n)).unwrap().count(),
                1 << (n - 1)
            );
        }
        // A cycle of 12: 2^12 - 12 - 1 + 1 cut patterns.
        let cycle = SynergyGraph::new(12, (0..12).map(|i| (i, (i + 1) % 12))).unwrap();
        let expected = (1u64..1 << 12).filter(|c| c.count_ones() >= 2).count() as u64 + 1;
        assert_eq!(feasible_partitions(&cycle).unwrap().count() as u64, expected);
    }

    #[test]
    fn bruteforce_examples() {
        let g = SynergyGraph::path(3);
        let mut t = ExplicitTable::new();
        for (m, v) in [
            (vec![0], 2.0),
            (vec![1], 2.0),
            (vec![2], 2.0),
            (vec![0, 1], 1.0),
            (vec![1, 2], 1.0),
            (vec![0, 1, 2], 1.0),
        ] {
            t.insert(m, v);
        }
        let r = solve_bruteforce(&g, &t, &SolveOptions::default()).unwrap();
        assert_eq!(
            (r.optimal_value, r.optimal_cs.to_string()),
            (6.0, "{0} {1} {2}".to_string())
        );

        let zero = SeededRandom { seed: 1, scale: 0.0 };
        let r = solve_bruteforce(&SynergyGraph::complete(4), &zero, &SolveOptions::default()).unwrap();
        assert_eq!(r.optimal_value, 0.0);
        // Ties go to the first structure in enumeration order.
        assert_eq!(r.optimal_cs.to_string(), "{0,1,2,3}");
    }

    #[test]
    fn bruteforce_self_consistent() {
        let g = SynergyGraph::new(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap();
        let m = SeededRandom::new(4);
        let r = solve_bruteforce(&g, &m, &SolveOptions::default()).unwrap();
        assert_eq!(cs_value(&g, &m, &r.optimal_cs).unwrap(), r.optimal_value);
    }

    #[test]
    fn two_partition_counts() {
        assert_eq!(count_two_partitions(&SynergyGraph::path(3)), Ok(2));
        for n in 1..=10 {
            assert_eq!(count_two_partitions(&SynergyGraph::complete(n)), Ok((1 << (n - 1)) - 1));
        }
        let star = SynergyGraph::new(40, (1..40).map(|i| (0, i))).unwrap();
        assert_eq!(count_two_partitions(&star), Ok(39));
        let dense = SynergyGraph::complete(31);
        assert!(count_two_partitions(&dense).is_err());
        // Two components split exactly one way.
        assert_eq!(
            count_two_partitions(&SynergyGraph::new(4, [(0, 1), (2, 3)]).unwrap()),
            Ok(1)
        );
    }

    #[test]
    fn tree_shortcut_matches_scan() {
        let g = SynergyGraph::new(8, [(0, 1), (1, 2), (1, 3), (3, 4), (4, 5), (0, 6), (6, 7)]).unwrap();
        let adj = g.adjacency::<SmallSet>();
        let full = (1u64 << 8) - 1;
        let scanned = (0..(1u64 << 7) - 1)
            .map(|r| r << 1 | 1)
            .filter(|&h| adj.is_feasible(&SmallSet::from_mask(h)) && adj.is_feasible(&SmallSet::from_mask(full ^ h)))
            .count() as u64;
        assert_eq!(count_two_partitions(&g), Ok(scanned));
        assert_eq!(scanned, 7);
    }
}
