//! Finite subsets of a ground interval `[1..n]`, stored as packed bits.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Size of the ground interval `[1..n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bound(u32);

impl Bound {
    pub const MAX: u32 = 4096;

    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || n > Self::MAX as u64 {
            return Err(Error::InvalidBound { got: n, max: Self::MAX });
        }
        Ok(Bound(n as u32))
    }

    #[inline]
    pub fn n(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn contains(self, elem: u32) -> bool {
        elem >= 1 && elem <= self.0
    }

    fn words(self) -> usize {
        (self.0 as usize).div_ceil(64)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of `[1..bound]`. Element `m` lives at bit `m - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    bound: Bound,
    words: Box<[u64]>,
}

impl ElemSet {
    pub fn empty(bound: Bound) -> Self {
        ElemSet { bound, words: vec![0; bound.words()].into_boxed_slice() }
    }

    pub fn full(bound: Bound) -> Self {
        Self::interval(bound, 1, bound.n())
    }

    /// `{lo, lo+1, ..., hi}` clipped to the bound.
    pub fn interval(bound: Bound, lo: u32, hi: u32) -> Self {
        let mut s = Self::empty(bound);
        for m in lo.max(1)..=hi.min(bound.n()) {
            s.set_bit(m);
        }
        s
    }

    pub fn from_elems<I>(bound: Bound, elems: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<u64>,
    {
        let mut s = Self::empty(bound);
        for e in elems {
            let e: u64 = e.into();
            if e == 0 || e > bound.n() as u64 {
                return Err(Error::ElementOutOfRange { elem: e, n: bound.n() });
            }
            s.set_bit(e as u32);
        }
        Ok(s)
    }

    #[inline]
    pub fn bound(&self) -> Bound {
        self.bound
    }

    #[inline]
    fn set_bit(&mut self, m: u32) {
        let i = (m - 1) as usize;
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    /// Adds `m`; panics if `m` is outside the bound.
    pub fn insert(&mut self, m: u32) {
        assert!(self.bound.contains(m), "element {m} outside [1..{}]", self.bound);
        self.set_bit(m);
    }

    pub fn remove(&mut self, m: u32) {
        if self.bound.contains(m) {
            let i = (m - 1) as usize;
            self.words[i / 64] &= !(1u64 << (i % 64));
        }
    }

    #[inline]
    pub fn contains(&self, m: u32) -> bool {
        if !self.bound.contains(m) {
            return false;
        }
        let i = (m - 1) as usize;
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn min_elem(&self) -> Option<u32> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| (i * 64) as u32 + w.trailing_zeros() + 1)
    }

    pub fn max_elem(&self) -> Option<u32> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| (i * 64) as u32 + 64 - w.leading_zeros())
    }

    fn check(&self, other: &ElemSet) -> Result<()> {
        if self.bound != other.bound {
            return Err(Error::BoundMismatch { expected: self.bound.n(), found: other.bound.n() });
        }
        Ok(())
    }

    fn zip_with(&self, other: &ElemSet, f: impl Fn(u64, u64) -> u64) -> Result<ElemSet> {
        self.check(other)?;
        let words = self.words.iter().zip(other.words.iter()).map(|(&a, &b)| f(a, b)).collect();
        Ok(ElemSet { bound: self.bound, words })
    }

    pub fn union(&self, other: &ElemSet) -> Result<ElemSet> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &ElemSet) -> Result<ElemSet> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &ElemSet) -> Result<ElemSet> {
        self.zip_with(other, |a, b| a & !b)
    }

    /// `self ⊆ other`. Sets over different bounds compare by elements.
    pub fn is_subset(&self, other: &ElemSet) -> bool {
        if self.bound == other.bound {
            return self.words.iter().zip(other.words.iter()).all(|(&a, &b)| a & !b == 0);
        }
        self.iter().all(|m| other.contains(m))
    }

    pub fn is_disjoint(&self, other: &ElemSet) -> bool {
        if self.bound == other.bound {
            return self.words.iter().zip(other.words.iter()).all(|(&a, &b)| a & b == 0);
        }
        self.iter().all(|m| !other.contains(m))
    }

    /// Same elements over another bound; fails if an element does not fit.
    pub fn with_bound(&self, bound: Bound) -> Result<ElemSet> {
        if bound == self.bound {
            return Ok(self.clone());
        }
        ElemSet::from_elems(bound, self.iter())
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// Canonical order: ascending minimum, then cardinality, then lexicographic.
    pub fn canonical_cmp(&self, other: &ElemSet) -> Ordering {
        self.min_elem()
            .cmp(&other.min_elem())
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.cmp(&other.bound).then_with(|| self.canonical_cmp(other))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros();
                self.cur &= self.cur - 1;
                return Some((self.idx * 64) as u32 + tz + 1);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a ElemSet {
    type Item = u32;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}
