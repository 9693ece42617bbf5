//! Independence oracles over a fixed ground set and the primitives built on
//! them: rank, closure, fundamental circuits, greedy minimum-weight bases,
//! and strong-exchange witnesses.
//!
//! Every tie between elements is broken by ascending id, everywhere. This
//! keeps all solvers and oracles byte-deterministic on the same input.

use crate::error::{Error, Result};

/// Dense index into the ground set; valid ids are `0..ground_size`.
pub type ElementId = usize;

/// Exact signed integer weight. Loaders scale fixed-point inputs up front so
/// all arithmetic here stays integral.
pub type Weight = i64;

const WORD_BITS: usize = 64;

/// Fixed-capacity bit set over a ground set. Iteration is always in
/// ascending id order; membership tests are O(1).
#[derive(Clone, PartialEq, Eq)]
pub struct ElementSet {
    words: Vec<u64>,
    ground: usize,
    len: usize,
}

impl ElementSet {
    pub fn empty(ground: usize) -> Self {
        ElementSet {
            words: vec![0; ground.div_ceil(WORD_BITS)],
            ground,
            len: 0,
        }
    }

    pub fn full(ground: usize) -> Self {
        Self::from_ids(ground, 0..ground)
    }

    pub fn from_ids(ground: usize, ids: impl IntoIterator<Item = ElementId>) -> Self {
        let mut set = Self::empty(ground);
        for e in ids {
            set.insert(e);
        }
        set
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, e: ElementId) -> bool {
        debug_assert!(e < self.ground);
        self.words[e / WORD_BITS] >> (e % WORD_BITS) & 1 == 1
    }

    /// Returns true if `e` was newly inserted.
    pub fn insert(&mut self, e: ElementId) -> bool {
        assert!(e < self.ground, "element {e} outside ground set");
        let word = &mut self.words[e / WORD_BITS];
        let mask = 1u64 << (e % WORD_BITS);
        if *word & mask == 0 {
            *word |= mask;
            self.len += 1;
            true
        } else {
            false
        }
    }

    /// Returns true if `e` was present.
    pub fn remove(&mut self, e: ElementId) -> bool {
        assert!(e < self.ground, "element {e} outside ground set");
        let word = &mut self.words[e / WORD_BITS];
        let mask = 1u64 << (e % WORD_BITS);
        if *word & mask != 0 {
            *word &= !mask;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn plus(&self, e: ElementId) -> Self {
        let mut out = self.clone();
        out.insert(e);
        out
    }

    pub fn minus(&self, e: ElementId) -> Self {
        let mut out = self.clone();
        out.remove(e);
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        assert_eq!(self.ground, other.ground, "ground sets differ");
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word: self.words.first().copied().unwrap_or(0),
            idx: 0,
        }
    }

    pub fn to_vec(&self) -> Vec<ElementId> {
        self.iter().collect()
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.ground, other.ground, "ground sets differ");
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op(a, b))
            .collect();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        ElementSet {
            words,
            ground: self.ground,
            len,
        }
    }
}

impl std::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word: u64,
    idx: usize,
}

impl Iterator for Iter<'_> {
    type Item = ElementId;

    fn next(&mut self) -> Option<ElementId> {
        while self.word == 0 {
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.word = self.words[self.idx];
        }
        let bit = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(self.idx * WORD_BITS + bit)
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = ElementId;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Membership test for the independent-set family of a matroid.
///
/// Implementations must satisfy the matroid axioms: the empty set is
/// independent, subsets of independent sets are independent, and a larger
/// independent set can always extend a smaller one by some element.
pub trait MatroidOracle {
    fn ground_size(&self) -> usize;
    fn is_independent(&self, set: &ElementSet) -> bool;
}

/// Sum of weights over a set.
pub fn set_weight(set: &ElementSet, weights: &[Weight]) -> Weight {
    set.iter().map(|e| weights[e]).sum()
}

/// Maximal independent subset of `a`, grown greedily in ascending id order.
fn max_independent_subset<O: MatroidOracle>(oracle: &O, a: &ElementSet) -> ElementSet {
    let mut s = ElementSet::empty(oracle.ground_size());
    for e in a.iter() {
        s.insert(e);
        if !oracle.is_independent(&s) {
            s.remove(e);
        }
    }
    s
}

/// Size of a maximal independent subset of `a`.
pub fn rank<O: MatroidOracle>(oracle: &O, a: &ElementSet) -> usize {
    max_independent_subset(oracle, a).len()
}

/// All elements whose addition to `a` does not raise its rank. Always a
/// superset of `a`; loops land in the closure of the empty set.
pub fn closure<O: MatroidOracle>(oracle: &O, a: &ElementSet) -> ElementSet {
    let base = max_independent_subset(oracle, a);
    let mut out = a.clone();
    let mut scratch = base.clone();
    for e in 0..oracle.ground_size() {
        if out.contains(e) {
            continue;
        }
        if scratch.insert(e) {
            if !oracle.is_independent(&scratch) {
                out.insert(e);
            }
            scratch.remove(e);
        }
    }
    out
}

/// The unique circuit inside `x + e` for an independent `x` with `x + e`
/// dependent. An element sits on the circuit exactly when deleting it makes
/// `x + e` independent again.
pub fn find_circuit<O: MatroidOracle>(
    oracle: &O,
    x: &ElementSet,
    e: ElementId,
) -> Result<ElementSet> {
    if x.contains(e) || !oracle.is_independent(x) {
        return Err(Error::PreconditionViolated(
            "find_circuit needs an independent set and a fresh element",
        ));
    }
    let xe = x.plus(e);
    if oracle.is_independent(&xe) {
        return Err(Error::PreconditionViolated(
            "find_circuit needs the extension to be dependent",
        ));
    }
    let mut circuit = ElementSet::empty(oracle.ground_size());
    let mut scratch = xe.clone();
    for f in xe.iter() {
        scratch.remove(f);
        if oracle.is_independent(&scratch) {
            circuit.insert(f);
        }
        scratch.insert(f);
    }
    Ok(circuit)
}

/// Greedy minimum-weight basis of the submatroid restricted to `restrict`,
/// scanning candidates by ascending `(weight, id)`.
pub fn min_weight_basis<O: MatroidOracle>(
    oracle: &O,
    restrict: &ElementSet,
    weights: &[Weight],
) -> ElementSet {
    let mut ids = restrict.to_vec();
    ids.sort_unstable_by_key(|&e| (weights[e], e));
    let mut basis = ElementSet::empty(oracle.ground_size());
    for e in ids {
        basis.insert(e);
        if !oracle.is_independent(&basis) {
            basis.remove(e);
        }
    }
    basis
}

/// For bases `x`, `y` and `e` in `x`, finds the lowest-id `e2` in `y` such
/// that both `x - e + e2` and `y - e2 + e` are bases.
pub fn strong_exchange_witness<O: MatroidOracle>(
    oracle: &O,
    x: &ElementSet,
    y: &ElementSet,
    e: ElementId,
) -> Result<ElementId> {
    debug_assert!(x.contains(e));
    let r = x.len();
    for e2 in y.iter() {
        let xs = x.minus(e).plus(e2);
        if xs.len() != r {
            continue;
        }
        let ys = y.minus(e2).plus(e);
        if ys.len() != y.len() {
            continue;
        }
        if oracle.is_independent(&xs) && oracle.is_independent(&ys) {
            return Ok(e2);
        }
    }
    Err(Error::InternalInvariantBroken(
        "no strong exchange witness found for the given bases",
    ))
}

/// Uniform matroid U(r, n): a set is independent when it has at most `r`
/// elements.
#[derive(Clone, Debug)]
pub struct UniformMatroid {
    rank: usize,
    ground: usize,
}

impl UniformMatroid {
    pub fn new(rank: usize, ground: usize) -> Self {
        UniformMatroid { rank, ground }
    }
}

impl MatroidOracle for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.ground
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        set.len() <= self.rank
    }
}

/// Partition matroid: ground elements are assigned to blocks, and block `b`
/// contributes at most `caps[b]` elements to any independent set.
#[derive(Clone, Debug)]
pub struct PartitionMatroid {
    block_of: Vec<usize>,
    caps: Vec<usize>,
}

impl PartitionMatroid {
    pub fn new(block_of: Vec<usize>, caps: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = block_of.iter().find(|&&b| b >= caps.len()) {
            return Err(Error::InvalidParams(format!(
                "block id {bad} has no cap (only {} blocks)",
                caps.len()
            )));
        }
        Ok(PartitionMatroid { block_of, caps })
    }
}

impl MatroidOracle for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.block_of.len()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        let mut used = vec![0usize; self.caps.len()];
        for e in set.iter() {
            let b = self.block_of[e];
            used[b] += 1;
            if used[b] > self.caps[b] {
                return false;
            }
        }
        true
    }
}

/// A weighted matroid with a designated set of pre-existing elements:
/// everything a construction-order solve needs.
#[derive(Clone, Debug)]
pub struct Instance<O> {
    pub oracle: O,
    pub weights: Vec<Weight>,
    pub existing: Vec<bool>,
}

impl<O: MatroidOracle> Instance<O> {
    pub fn new(oracle: O, weights: Vec<Weight>, existing: Vec<bool>) -> Result<Self> {
        if weights.len() != oracle.ground_size() || existing.len() != oracle.ground_size() {
            return Err(Error::InvalidParams(format!(
                "weights ({}) and existing flags ({}) must match the ground size ({})",
                weights.len(),
                existing.len(),
                oracle.ground_size()
            )));
        }
        Ok(Instance {
            oracle,
            weights,
            existing,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.weights.len()
    }

    /// Number of potential (not yet existing) elements; the plan length T.
    pub fn horizon(&self) -> usize {
        self.existing.iter().filter(|&&x| !x).count()
    }

    pub fn weight(&self, e: ElementId) -> Weight {
        self.weights[e]
    }

    pub fn is_existing(&self, e: ElementId) -> bool {
        self.existing[e]
    }

    pub fn existing_set(&self) -> ElementSet {
        ElementSet::from_ids(
            self.ground_size(),
            (0..self.ground_size()).filter(|&e| self.existing[e]),
        )
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.ground_size())
    }

    pub fn potential_ids(&self) -> Vec<ElementId> {
        (0..self.ground_size()).filter(|&e| !self.existing[e]).collect()
    }

    /// All ids sorted by ascending `(weight, id)`; the canonical scan order.
    pub fn ids_by_weight(&self) -> Vec<ElementId> {
        let mut ids: Vec<ElementId> = (0..self.ground_size()).collect();
        ids.sort_unstable_by_key(|&e| (self.weights[e], e));
        ids
    }

    /// Checks that the existing elements span the whole matroid and that
    /// objective sums cannot overflow 64-bit arithmetic.
    pub fn validate(&self) -> Result<()> {
        let total: i128 = self.weights.iter().map(|w| w.unsigned_abs() as i128).sum();
        if total * (self.ground_size() as i128 + 1) > i64::MAX as i128 {
            return Err(Error::OverflowRisk);
        }
        let full_rank = rank(&self.oracle, &self.full_set());
        let existing_rank = rank(&self.oracle, &self.existing_set());
        if existing_rank < full_rank {
            return Err(Error::InfeasibleInstance {
                components: full_rank - existing_rank + 1,
            });
        }
        Ok(())
    }
}
