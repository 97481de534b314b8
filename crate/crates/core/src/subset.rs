//! Ground sets, finite subsets and the point sets of `σ_n(2^X)`.
//!
//! A [`Subset`] is a bit-mask over the anonymous ground `{0, .., N-1}`.
//! Subsets are ordered first by cardinality, then lexicographically on
//! their sorted member lists, which is the canonical enumeration order
//! used everywhere in the crate (kernels, JSON output, searches).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ground size.
pub const MAX_GROUND: usize = 128;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u128);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_mask(mask: u128) -> Self {
        Subset(mask)
    }

    pub fn mask(self) -> u128 {
        self.0
    }

    /// Builds a subset from element indices; duplicates are ignored.
    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Result<Self> {
        let mut mask = 0u128;
        for x in members {
            if x >= MAX_GROUND {
                return Err(Error::Domain(format!(
                    "element {x} exceeds the supported ground size {MAX_GROUND}"
                )));
            }
            mask |= 1 << x;
        }
        Ok(Subset(mask))
    }

    /// Parses a strictly increasing index list, as used on the wire.
    pub fn from_sorted(members: &[usize]) -> Result<Self> {
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Schema(format!(
                "index list {members:?} is not strictly increasing"
            )));
        }
        Self::from_members(members.iter().copied())
    }

    pub fn singleton(x: usize) -> Self {
        debug_assert!(x < MAX_GROUND);
        Subset(1 << x)
    }

    /// `{0, .., n-1}`.
    pub fn prefix(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND);
        if n == MAX_GROUND {
            Subset(u128::MAX)
        } else {
            Subset((1u128 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, x: usize) -> bool {
        x < MAX_GROUND && self.0 >> x & 1 == 1
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn with(self, x: usize) -> Subset {
        self.union(Subset::singleton(x))
    }

    pub fn without(self, x: usize) -> Subset {
        self.difference(Subset::singleton(x))
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Relabels `self ⊆ frame` by the rank of each element inside `frame`.
    pub fn reindex_into(self, frame: Subset) -> Subset {
        let mut out = 0u128;
        for (rank, x) in frame.iter().enumerate() {
            if self.contains(x) {
                out |= 1 << rank;
            }
        }
        Subset(out)
    }

    /// Inverse of [`Subset::reindex_into`]: rank `r` maps to the `r`-th element of `frame`.
    pub fn lift_from(self, frame: Subset) -> Subset {
        let mut out = 0u128;
        for (rank, x) in frame.iter().enumerate() {
            if self.contains(rank) {
                out |= 1 << x;
            }
        }
        Subset(out)
    }

    /// All subsets of `self` with at most `cap` elements, in canonical order.
    pub fn subsets_up_to(self, cap: usize) -> Vec<Subset> {
        let elems = self.to_vec();
        let mut out = Vec::new();
        for k in 0..=cap.min(elems.len()) {
            for_each_combination(&elems, k, |s| out.push(s));
        }
        out
    }

    /// All subsets of `self`, in canonical order.
    pub fn all_subsets(self) -> Vec<Subset> {
        self.subsets_up_to(self.len())
    }
}

pub struct Members(u128);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// Calls `visit` on every `k`-element subset of `elems` (assumed sorted), in lexicographic order.
pub fn for_each_combination(elems: &[usize], k: usize, mut visit: impl FnMut(Subset)) {
    if k > elems.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mask = idx.iter().fold(0u128, |m, &i| m | 1 << elems[i]);
        visit(Subset(mask));
        // rightmost index that can still move
        let mut pos = k;
        while pos > 0 && idx[pos - 1] == elems.len() - k + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return;
        }
        idx[pos - 1] += 1;
        for q in pos..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSet {
    pub size: usize,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self> {
        if size > MAX_GROUND {
            return Err(Error::Domain(format!(
                "ground size {size} exceeds {MAX_GROUND}"
            )));
        }
        Ok(GroundSet { size })
    }

    pub fn full(self) -> Subset {
        Subset::prefix(self.size)
    }

    pub fn contains(self, s: Subset) -> bool {
        s.is_subset_of(self.full())
    }

    pub fn check(self, s: Subset) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::NotASubset(s.to_string()))
        }
    }
}

/// The point set of `σ_cap(2^ground)`: all subsets with at most `cap` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigmaSpace {
    pub ground: GroundSet,
    pub cap: usize,
}

impl SigmaSpace {
    pub fn new(ground: GroundSet, cap: usize) -> Self {
        SigmaSpace { ground, cap }
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.ground.contains(s) && s.len() <= self.cap
    }

    /// Every point exactly once, in (cardinality, lexicographic) order.
    pub fn points(&self) -> Vec<Subset> {
        self.ground.full().subsets_up_to(self.cap)
    }

    pub fn point_count(&self) -> usize {
        let n = self.ground.size;
        let mut total = 0usize;
        let mut c = 1usize;
        for k in 0..=self.cap.min(n) {
            total += c;
            c = c * (n - k) / (k + 1);
        }
        total
    }
}
