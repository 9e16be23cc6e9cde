//! Fixed-width bitsets over dense element ids.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

/// Largest number of elements an [`ElemSet`] can index.
pub const MAX_ELEMS: usize = 256;

const WORDS: usize = MAX_ELEMS / 64;

/// A subset of `0..MAX_ELEMS`.
///
/// Ordering compares sets as unsigned integers (bit `i` has weight `2^i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElemSet([u64; WORDS]);

impl ElemSet {
    pub const fn new() -> Self {
        ElemSet([0; WORDS])
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = Self::new();
        s.insert(i);
        s
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ELEMS);
        let mut s = Self::new();
        for w in 0..WORDS {
            let lo = w * 64;
            if n >= lo + 64 {
                s.0[w] = u64::MAX;
            } else if n > lo {
                s.0[w] = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1u64 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < MAX_ELEMS && self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn with(mut self, i: usize) -> Self {
        self.insert(i);
        self
    }

    pub fn without(mut self, i: usize) -> Self {
        self.remove(i);
        self
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &ElemSet) -> bool {
        self.0.iter().zip(other.0.iter()).any(|(a, b)| a & b != 0)
    }

    /// Least member.
    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> Iter {
        Iter {
            words: self.0,
            word: 0,
        }
    }

    /// `'1'`/`'0'` per element, element 0 first.
    pub fn to_bitstring(&self, n: usize) -> String {
        (0..n)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }
}

pub struct Iter {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                let bit = w.trailing_zeros() as usize;
                self.words[self.word] &= w - 1;
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
        }
        None
    }
}

impl IntoIterator for ElemSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl IntoIterator for &ElemSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = ElemSet::new();
        for i in it {
            s.insert(i);
        }
        s
    }
}

impl BitOr for ElemSet {
    type Output = ElemSet;
    fn bitor(mut self, rhs: ElemSet) -> ElemSet {
        for w in 0..WORDS {
            self.0[w] |= rhs.0[w];
        }
        self
    }
}

impl BitAnd for ElemSet {
    type Output = ElemSet;
    fn bitand(mut self, rhs: ElemSet) -> ElemSet {
        for w in 0..WORDS {
            self.0[w] &= rhs.0[w];
        }
        self
    }
}

impl Sub for ElemSet {
    type Output = ElemSet;
    fn sub(mut self, rhs: ElemSet) -> ElemSet {
        for w in 0..WORDS {
            self.0[w] &= !rhs.0[w];
        }
        self
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
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

/// Visits the subsets of `items` with at most `max` members, by size and then
/// lexicographically. Stops early when `f` returns `false`.
pub fn for_each_subset(items: &[usize], max: usize, mut f: impl FnMut(ElemSet) -> bool) {
    fn rec(
        items: &[usize],
        start: usize,
        left: usize,
        cur: ElemSet,
        f: &mut dyn FnMut(ElemSet) -> bool,
    ) -> bool {
        if left == 0 {
            return f(cur);
        }
        for i in start..items.len() {
            if items.len() - i < left {
                break;
            }
            if !rec(items, i + 1, left - 1, cur.with(items[i]), f) {
                return false;
            }
        }
        true
    }
    for k in 0..=max.min(items.len()) {
        if !rec(items, 0, k, ElemSet::new(), &mut f) {
            return;
        }
    }
}
