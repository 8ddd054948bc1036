use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest label a [`FinSet`] can hold.
pub const MAX_LABEL: u32 = 64;

/// A finite nonempty set of labels from `1..=64`, stored as a bitmask.
///
/// Ordering is lexicographic on the ascending element lists, so
/// `{1,2} < {1,3} < {2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FinSet(u64);

#[inline]
pub(crate) fn bit(label: u32) -> u64 {
    1u64 << (label - 1)
}

pub(crate) fn labels_of(mut bits: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if bits == 0 {
            return None;
        }
        let low = bits.trailing_zeros();
        bits &= bits - 1;
        Some(low + 1)
    })
}

impl FinSet {
    pub fn new(labels: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut bits = 0u64;
        for label in labels {
            if label == 0 || label > MAX_LABEL {
                return Err(Error::LabelOutOfRange(label));
            }
            bits |= bit(label);
        }
        Self::from_bits(bits).ok_or(Error::EmptySet)
    }

    pub fn singleton(label: u32) -> Result<Self> {
        Self::new([label])
    }

    /// `{lo, lo+1, …, hi}`.
    pub fn range(lo: u32, hi: u32) -> Result<Self> {
        Self::new(lo..=hi)
    }

    pub fn from_bits(bits: u64) -> Option<Self> {
        (bits != 0).then_some(FinSet(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    // never empty by construction, so no `is_empty`
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, label: u32) -> bool {
        (1..=MAX_LABEL).contains(&label) && self.0 & bit(label) != 0
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        labels_of(self.0)
    }

    pub fn min(self) -> u32 {
        self.0.trailing_zeros() + 1
    }

    pub fn max(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    pub fn union(self, other: FinSet) -> FinSet {
        FinSet(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: FinSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: FinSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// The set with `label` removed, or `None` if that leaves it empty.
    pub fn without(self, label: u32) -> Option<FinSet> {
        FinSet::from_bits(self.0 & !bit(label))
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().collect()
    }
}

impl Ord for FinSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for FinSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, label) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{label}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FinSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<u32>::deserialize(deserializer)?;
        FinSet::new(labels).map_err(serde::de::Error::custom)
    }
}

/// All `k`-element subsets of `pool` (a bitmask), in lexicographic order of
/// their ascending element lists.
pub struct Combinations {
    pool: Vec<u32>,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(pool: u64, k: usize) -> Self {
        let pool: Vec<u32> = labels_of(pool).collect();
        let done = k > pool.len();
        Combinations { pool, idx: (0..k).collect(), done }
    }
}

impl Iterator for Combinations {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let current = self.idx.iter().fold(0u64, |acc, &i| acc | bit(self.pool[i]));
        let k = self.idx.len();
        let n = self.pool.len();
        // advance to the next index tuple
        match (0..k).rev().find(|&i| self.idx[i] < n - k + i) {
            Some(i) => {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let s = FinSet::new([3, 1, 7]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!((s.min(), s.max()), (1, 7));
        assert_eq!(s.to_vec(), vec![1, 3, 7]);
        assert!(s.contains(3) && !s.contains(2) && !s.contains(0) && !s.contains(65));
        assert_eq!(s.without(3).unwrap().to_vec(), vec![1, 7]);
        assert!(FinSet::singleton(4).unwrap().without(4).is_none());
        assert!(matches!(FinSet::new([]), Err(Error::EmptySet)));
        assert!(matches!(FinSet::new([0]), Err(Error::LabelOutOfRange(0))));
        assert!(matches!(FinSet::new([65]), Err(Error::LabelOutOfRange(65))));
        assert_eq!(FinSet::new([64]).unwrap().max(), 64);
    }

    #[test]
    fn lexicographic_order() {
        let a = FinSet::new([1, 2]).unwrap();
        let b = FinSet::new([1, 3]).unwrap();
        let c = FinSet::new([2]).unwrap();
        let d = FinSet::new([1]).unwrap();
        assert!(d < a && a < b && b < c);
    }

    #[test]
    fn combinations_in_lex_order() {
        let pool = FinSet::range(1, 4).unwrap().bits();
        let got: Vec<Vec<u32>> = Combinations::new(pool, 2)
            .map(|b| FinSet::from_bits(b).unwrap().to_vec())
            .collect();
        assert_eq!(
            got,
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
        assert_eq!(Combinations::new(pool, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(Combinations::new(pool, 5).count(), 0);
        assert_eq!(Combinations::new(FinSet::range(1, 10).unwrap().bits(), 4).count(), 210);
    }

    #[test]
    fn serde_as_label_list() {
        let s = FinSet::new([2, 5]).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[2,5]");
        let back: FinSet = serde_json::from_str("[5,2]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<FinSet>("[]").is_err());
    }
}
