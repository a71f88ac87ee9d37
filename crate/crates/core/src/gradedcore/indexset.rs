//! Sorted index sets for Grassmann monomials (`θ_I`, `dx_I`), stored as bitmasks.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A strictly increasing set of indices below 32.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet(pub u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn single(i: usize) -> Self {
        IndexSet(1 << i)
    }

    pub fn from_indices(indices: &[usize]) -> Option<(Self, bool)> {
        // returns the set and whether sorting introduced a sign
        let mut set = IndexSet::EMPTY;
        let mut negative = false;
        for &i in indices {
            let (next, neg) = set.insert_right(i)?;
            set = next;
            negative ^= neg;
        }
        Some((set, negative))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.0 & (1 << i) != 0)
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Number of members strictly below `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u32 << i) - 1)).count_ones() as usize
    }

    /// Number of members strictly above `i`.
    pub fn count_above(self, i: usize) -> usize {
        if i >= 31 {
            0
        } else {
            (self.0 >> (i + 1)).count_ones() as usize
        }
    }

    /// `θ_self · θ_other` as `(sorted set, sign is negative)`, `None` if they overlap.
    pub fn product(self, other: IndexSet) -> Option<(IndexSet, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let inversions: usize = other.iter().map(|b| self.count_above(b)).sum();
        Some((IndexSet(self.0 | other.0), inversions % 2 == 1))
    }

    /// Left multiplication `θ_i · θ_self`.
    pub fn insert_left(self, i: usize) -> Option<(IndexSet, bool)> {
        IndexSet::single(i).product(self)
    }

    /// Right multiplication `θ_self · θ_i`.
    pub fn insert_right(self, i: usize) -> Option<(IndexSet, bool)> {
        self.product(IndexSet::single(i))
    }

    /// Left derivative `∂/∂θ_i` applied to `θ_self`.
    pub fn left_derivative(self, i: usize) -> Option<(IndexSet, bool)> {
        if !self.contains(i) {
            return None;
        }
        Some((IndexSet(self.0 & !(1 << i)), self.count_below(i) % 2 == 1))
    }

    /// Right derivative `θ_self ∂⃖/∂θ_i`.
    pub fn right_derivative(self, i: usize) -> Option<(IndexSet, bool)> {
        if !self.contains(i) {
            return None;
        }
        Some((IndexSet(self.0 & !(1 << i)), self.count_above(i) % 2 == 1))
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.indices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        let mut prev: Option<usize> = None;
        for &i in &v {
            if i >= 32 || prev.is_some_and(|p| p >= i) {
                return Err(serde::de::Error::custom("index set must be strictly increasing and < 32"));
            }
            prev = Some(i);
        }
        Ok(IndexSet(v.iter().fold(0, |acc, &i| acc | (1 << i))))
    }
}
