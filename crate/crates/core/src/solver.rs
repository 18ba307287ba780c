//! Shared solver vocabulary: options, results and algorithm tags.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{CsgError, Result};
use crate::graph::CoalitionStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Dype,
    Dp,
    Idp,
    Dyce,
    BruteForce,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Dype,
        Algorithm::Dp,
        Algorithm::Idp,
        Algorithm::Dyce,
        Algorithm::BruteForce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dype => "dype",
            Algorithm::Dp => "dp",
            Algorithm::Idp => "idp",
            Algorithm::Dyce => "dyce",
            Algorithm::BruteForce => "bruteforce",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = CsgError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                CsgError::Parse(format!(
                    "unknown algorithm {s:?} (expected dype, dp, idp, dyce or bruteforce)"
                ))
            })
    }
}

/// Which of several equally good subspaces a subproblem keeps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Strict improvement only; the first maximizer wins.
    #[default]
    FirstWins,
    LastWins,
}

impl TieBreak {
    #[inline]
    pub(crate) fn improves(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            TieBreak::FirstWins => candidate > incumbent,
            TieBreak::LastWins => candidate >= incumbent,
        }
    }
}

/// Largest agent count for which the exhaustive DP baselines allocate their
/// `2^n` tables.
pub const DEFAULT_DENSE_LIMIT: usize = 25;

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub tie_break: TieBreak,
    /// Checked cooperatively between subproblems.
    pub deadline: Option<Instant>,
    pub dense_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tie_break: TieBreak::FirstWins,
            deadline: None,
            dense_limit: DEFAULT_DENSE_LIMIT,
        }
    }
}

impl SolveOptions {
    pub fn with_timeout(timeout: Duration) -> Self {
        SolveOptions {
            deadline: Some(Instant::now() + timeout),
            ..Self::default()
        }
    }

    #[inline]
    pub(crate) fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(CsgError::Timeout),
            _ => Ok(()),
        }
    }
}

/// Instrumentation counters common to every solver.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub subproblems_stored: u64,
    pub subspaces_evaluated: u64,
}

impl std::ops::AddAssign for Counters {
    fn add_assign(&mut self, rhs: Self) {
        self.subproblems_stored += rhs.subproblems_stored;
        self.subspaces_evaluated += rhs.subspaces_evaluated;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub algorithm: Algorithm,
    pub n: usize,
    /// Value of `optimal_cs`, summed over its parts in canonical order.
    pub optimal_value: f64,
    pub optimal_cs: CoalitionStructure,
    pub subproblems_stored: u64,
    pub subspaces_evaluated: u64,
    pub elapsed: Duration,
    /// Pseudotree roots, one per connected component (DyPE only).
    pub roots: Vec<usize>,
    /// Concatenated per-component preorders (DyPE only).
    pub ordering: Vec<usize>,
}

impl SolveResult {
    pub fn counters(&self) -> Counters {
        Counters {
            subproblems_stored: self.subproblems_stored,
            subspaces_evaluated: self.subspaces_evaluated,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_roundtrip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>(), Ok(a));
        }
        assert!("ip".parse::<Algorithm>().is_err());
        assert_eq!("DyPE".parse::<Algorithm>(), Ok(Algorithm::Dype));
    }

    #[test]
    fn tie_break_semantics() {
        assert!(!TieBreak::FirstWins.improves(1.0, 1.0));
        assert!(TieBreak::LastWins.improves(1.0, 1.0));
        assert!(TieBreak::FirstWins.improves(2.0, 1.0));
    }

    #[test]
    fn expired_deadline() {
        let opts = SolveOptions::with_timeout(Duration::ZERO);
        assert_eq!(opts.check_deadline(), Err(CsgError::Timeout));
        assert_eq!(SolveOptions::default().check_deadline(), Ok(()));
    }
}
