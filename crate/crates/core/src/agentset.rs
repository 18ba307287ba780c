//! Agent sets (coalitions) over a fixed universe `{0, .., n-1}`.
//!
//! Two backends share the [`AgentSet`] trait: [`SmallSet`], a single machine
//! word for universes of at most 64 agents, and [`WideSet`], a fixed-width
//! multi-word bitset for anything larger. Solvers are generic over the trait
//! and pick a backend from the instance size.

use std::fmt;
use std::hash::Hash;

/// A subset of the agent universe with constant-time membership and
/// ascending iteration.
///
/// Binary operations assume both operands were created for the same
/// universe size.
pub trait AgentSet: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync {
    /// Largest universe this backend can represent, if bounded.
    const MAX_UNIVERSE: Option<usize>;

    fn empty(universe: usize) -> Self;
    fn insert(&mut self, agent: usize);
    fn remove(&mut self, agent: usize);
    fn contains(&self, agent: usize) -> bool;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool;
    fn union_with(&mut self, other: &Self);
    fn intersect_with(&mut self, other: &Self);
    fn difference_with(&mut self, other: &Self);
    fn is_subset(&self, other: &Self) -> bool;
    fn intersects(&self, other: &Self) -> bool;

    /// Backing words, least significant agent first.
    fn words(&self) -> &[u64];

    /// Dense table index, available only for single-word sets.
    fn dense_index(&self) -> Option<usize> {
        None
    }

    fn singleton(universe: usize, agent: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(agent);
        s
    }

    fn full(universe: usize) -> Self {
        Self::from_members(universe, 0..universe)
    }

    fn from_members<I: IntoIterator<Item = usize>>(universe: usize, members: I) -> Self {
        let mut s = Self::empty(universe);
        for a in members {
            s.insert(a);
        }
        s
    }

    fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    fn intersection(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    /// Members in ascending order.
    fn iter(&self) -> Members<'_> {
        Members::new(self.words())
    }

    /// Smallest member.
    fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Little-endian bitmask bytes with trailing zero bytes removed. Two sets
    /// with the same members encode identically regardless of backend.
    fn canonical_bytes(&self) -> Vec<u8> {
        let mut bytes: Vec<u8> = self.words().iter().flat_map(|w| w.to_le_bytes()).collect();
        while bytes.last() == Some(&0) {
            bytes.pop();
        }
        bytes
    }
}

/// Ascending iterator over the set bits of a word slice.
#[derive(Clone, Debug)]
pub struct Members<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl<'a> Members<'a> {
    fn new(words: &'a [u64]) -> Self {
        Members {
            words,
            index: 0,
            current: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for Members<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// Single-word agent set for universes of up to 64 agents.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SmallSet(u64);

impl SmallSet {
    pub const fn from_mask(mask: u64) -> Self {
        SmallSet(mask)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for SmallSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl AgentSet for SmallSet {
    const MAX_UNIVERSE: Option<usize> = Some(64);

    fn empty(universe: usize) -> Self {
        debug_assert!(universe <= 64, "SmallSet holds at most 64 agents");
        SmallSet(0)
    }

    #[inline]
    fn insert(&mut self, agent: usize) {
        self.0 |= 1 << agent;
    }

    #[inline]
    fn remove(&mut self, agent: usize) {
        self.0 &= !(1 << agent);
    }

    #[inline]
    fn contains(&self, agent: usize) -> bool {
        agent < 64 && self.0 >> agent & 1 == 1
    }

    #[inline]
    fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    fn is_empty(&self) -> bool {
        self.0 == 0
    }

    #[inline]
    fn union_with(&mut self, other: &Self) {
        self.0 |= other.0;
    }

    #[inline]
    fn intersect_with(&mut self, other: &Self) {
        self.0 &= other.0;
    }

    #[inline]
    fn difference_with(&mut self, other: &Self) {
        self.0 &= !other.0;
    }

    #[inline]
    fn is_subset(&self, other: &Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    fn intersects(&self, other: &Self) -> bool {
        self.0 & other.0 != 0
    }

    fn words(&self) -> &[u64] {
        std::slice::from_ref(&self.0)
    }

    fn dense_index(&self) -> Option<usize> {
        usize::try_from(self.0).ok()
    }

    #[inline]
    fn first(&self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

/// Multi-word agent set; the word count is fixed by the universe size.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WideSet {
    words: Box<[u64]>,
}

impl fmt::Debug for WideSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl AgentSet for WideSet {
    const MAX_UNIVERSE: Option<usize> = None;

    fn empty(universe: usize) -> Self {
        WideSet {
            words: vec![0; universe.div_ceil(64).max(1)].into_boxed_slice(),
        }
    }

    #[inline]
    fn insert(&mut self, agent: usize) {
        self.words[agent / 64] |= 1 << (agent % 64);
    }

    #[inline]
    fn remove(&mut self, agent: usize) {
        self.words[agent / 64] &= !(1 << (agent % 64));
    }

    #[inline]
    fn contains(&self, agent: usize) -> bool {
        self.words.get(agent / 64).is_some_and(|w| w >> (agent % 64) & 1 == 1)
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn union_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    fn intersect_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
    }

    fn difference_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & !b == 0)
    }

    fn intersects(&self, other: &Self) -> bool {
        self.words.iter().zip(other.words.iter()).any(|(a, b)| a & b != 0)
    }

    fn words(&self) -> &[u64] {
        &self.words
    }
}
