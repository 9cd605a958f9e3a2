//! Fixed-width element sets over a small indexed ground set.
//!
//! Every set in the crate (ground sets, bases, circuits, flats, partition
//! classes) is an [`ElemSet`]: one machine word with bit `i` standing for
//! element `i`. The ground-set size is carried by the owning matroid, not
//! by the set.

use std::cmp::Ordering;
use std::fmt;

/// Maximum ground-set size supported by [`ElemSet`].
pub const CAPACITY: usize = if cfg!(feature = "wide") { 24 } else { 16 };

/// A subset of `{0, .., CAPACITY - 1}`.
///
/// Ordering is the canonical family order used throughout the crate:
/// smaller sets first, then lexicographic on the ascending index lists.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElemSet(u32);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    /// The set `{0, .., n - 1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 32);
        if n >= 32 {
            ElemSet(u32::MAX)
        } else {
            ElemSet((1u32 << n) - 1)
        }
    }

    pub const fn from_bits(bits: u32) -> Self {
        ElemSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(e: usize) -> Self {
        ElemSet(1 << e)
    }

    /// Builds a set from element indices; duplicates collapse.
    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(ElemSet::EMPTY, |s, e| s.with(e))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e < 32 && self.0 & (1 << e) != 0
    }

    #[must_use]
    pub fn with(self, e: usize) -> Self {
        ElemSet(self.0 | (1 << e))
    }

    #[must_use]
    pub fn without(self, e: usize) -> Self {
        ElemSet(self.0 & !(1 << e))
    }

    #[must_use]
    pub fn union(self, other: Self) -> Self {
        ElemSet(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: Self) -> Self {
        ElemSet(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: Self) -> Self {
        ElemSet(self.0 & !other.0)
    }

    #[must_use]
    pub fn symmetric_difference(self, other: Self) -> Self {
        ElemSet(self.0 ^ other.0)
    }

    /// Complement relative to the ground set `{0, .., n - 1}`.
    #[must_use]
    pub fn complement(self, n: usize) -> Self {
        ElemSet(!self.0 & ElemSet::full(n).0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest element, if any.
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest element index plus one (0 for the empty set).
    pub fn span_len(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Squeezes the elements of `self` that lie in `keep` down to
    /// consecutive indices, preserving relative order.
    #[must_use]
    pub fn compress(self, keep: ElemSet) -> Self {
        let mut out = 0u32;
        for (pos, e) in keep.iter().enumerate() {
            if self.contains(e) {
                out |= 1 << pos;
            }
        }
        ElemSet(out)
    }

    /// Inverse of [`compress`](Self::compress): maps index `i` to the
    /// `i`-th element of `keep`.
    #[must_use]
    pub fn expand(self, keep: ElemSet) -> Self {
        let mut out = 0u32;
        for (pos, e) in keep.iter().enumerate() {
            if self.contains(pos) {
                out |= 1 << e;
            }
        }
        ElemSet(out)
    }

    /// Relabels through `labels[i]` (new index `i` to old index).
    #[must_use]
    pub fn relabel(self, labels: &[usize]) -> Self {
        self.iter().fold(ElemSet::EMPTY, |s, e| s.with(labels[e]))
    }

    /// All subsets of `self`, in increasing bit order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            // Lexicographic on ascending index lists: the first differing
            // element decides, and the side holding the smaller one wins.
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ElemSet::from_indices(iter)
    }
}

impl IntoIterator for ElemSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl serde::Serialize for ElemSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> serde::Deserialize<'de> for ElemSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&e| e >= CAPACITY) {
            return Err(serde::de::Error::custom(format!(
                "element {bad} exceeds capacity {CAPACITY}"
            )));
        }
        Ok(ElemSet::from_indices(v))
    }
}

/// Ascending element iterator.
#[derive(Clone)]
pub struct Iter(u32);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Subset iterator (carry-rippler).
pub struct Subsets {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = ElemSet;

    fn next(&mut self) -> Option<ElemSet> {
        let cur = self.next?;
        let succ = cur.wrapping_sub(self.mask) & self.mask;
        self.next = (succ != 0).then_some(succ);
        Some(ElemSet(cur))
    }
}

/// All `k`-subsets of `{0, .., n - 1}` in increasing numeric order
/// (Gosper's hack).
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = ElemSet> {
    let limit: u64 = 1u64 << n;
    let start: Option<u64> = if k > n { None } else { Some((1u64 << k) - 1) };
    let mut cur = start;
    std::iter::from_fn(move || {
        let c = cur?;
        if c >= limit {
            return None;
        }
        cur = if c == 0 {
            None
        } else {
            let low = c & c.wrapping_neg();
            let ripple = c + low;
            let next = (((ripple ^ c) >> 2) / low) | ripple;
            (next < limit).then_some(next)
        };
        Some(ElemSet(c as u32))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn canonical_order_is_size_then_lex() {
        let a = ElemSet::from_indices([0, 3]);
        let b = ElemSet::from_indices([1, 2]);
        let c = ElemSet::from_indices([0, 1, 2]);
        assert!(a < b);
        assert!(b < c);
        let mut v = vec![c, b, a, ElemSet::EMPTY];
        v.sort();
        assert_eq!(v, vec![ElemSet::EMPTY, a, b, c]);
        assert!(ElemSet::from_indices([0, 2]) < ElemSet::from_indices([0, 3]));
    }

    #[test]
    fn k_subsets_counts() {
        for n in 0..=8 {
            for k in 0..=n + 1 {
                let all: Vec<_> = k_subsets(n, k).collect();
                let expect = if k > n { 0 } else { binom(n, k) };
                assert_eq!(all.len(), expect, "n={n} k={k}");
                assert!(all
                    .iter()
                    .all(|s| s.len() == k && s.is_subset(ElemSet::full(n))));
            }
        }
    }

    #[test]
    fn subsets_enumerates_power_set() {
        let s = ElemSet::from_indices([1, 4, 6]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
    }

    #[test]
    fn compress_expand_roundtrip() {
        let keep = ElemSet::from_indices([1, 3, 4, 7]);
        let s = ElemSet::from_indices([3, 7]);
        let c = s.compress(keep);
        assert_eq!(c, ElemSet::from_indices([1, 3]));
        assert_eq!(c.expand(keep), s);
    }

    #[test]
    fn serde_as_sorted_list() {
        let s = ElemSet::from_indices([5, 0, 2]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[0,2,5]");
        let back: ElemSet = serde_json::from_str("[2,0,5]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<ElemSet>("[40]").is_err());
    }
}
