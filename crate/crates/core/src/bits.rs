//! Fixed-universe bit vectors tagged by what they index.

use serde::{Serialize, Serializer};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::marker::PhantomData;

use crate::error::{Error, Result};

/// Tag for sets of points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointTag {}
/// Tag for sets of lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineTag {}

/// A subset of `0..len`, stored little-endian in 64-bit words.
///
/// Bits at positions `>= len` are always zero.
pub struct BitSet<T> {
    len: usize,
    words: Vec<u64>,
    _tag: PhantomData<T>,
}

pub type PointSet = BitSet<PointTag>;
pub type LineSet = BitSet<LineTag>;

impl<T> Clone for BitSet<T> {
    fn clone(&self) -> Self {
        BitSet { len: self.len, words: self.words.clone(), _tag: PhantomData }
    }
}

impl<T> PartialEq for BitSet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.words == other.words
    }
}

impl<T> Eq for BitSet<T> {}

impl<T> Hash for BitSet<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.len.hash(state);
        self.words.hash(state);
    }
}

impl<T> fmt::Debug for BitSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<T> Serialize for BitSet<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl<T> BitSet<T> {
    pub fn empty(len: usize) -> Self {
        BitSet { len, words: vec![0; words_for(len)], _tag: PhantomData }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        s.words.iter_mut().for_each(|w| *w = !0);
        s.trim();
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Builds from raw words; bits beyond `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut s = BitSet { len, words, _tag: PhantomData };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let extra = self.words.len() * 64 - self.len;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !0u64 >> extra;
            }
        }
    }

    /// Size of the universe.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "index {i} outside universe {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "index {i} outside universe {}", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    pub fn or(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        out
    }

    /// Size of the intersection without allocating.
    pub fn intersection_count(&self, other: &Self) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        out.words.iter_mut().for_each(|w| *w = !*w);
        out.trim();
        out
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// The same indices under another tag (used for the point/line duality).
    pub fn retag<U>(&self) -> BitSet<U> {
        BitSet { len: self.len, words: self.words.clone(), _tag: PhantomData }
    }

    /// Big-endian hex of the set viewed as an integer with index 0 as the
    /// least significant bit; `ceil(len/4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (self.words[d * 4 / 64] >> (d * 4 % 64)) & 0xf;
                char::from_digit(nibble as u32, 16).unwrap()
            })
            .collect()
    }

    /// Inverse of [`to_hex`](Self::to_hex); rejects bits outside the universe.
    pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
        let hex = hex.trim().trim_start_matches("0x");
        let mut s = Self::empty(len);
        for (d, c) in hex.chars().rev().enumerate() {
            let nibble = c.to_digit(16).ok_or_else(|| Error::Parse(format!("bad hex digit {c:?}")))?;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let i = d * 4 + b;
                    if i >= len {
                        return Err(Error::Parse(format!("bit {i} outside universe {len}")));
                    }
                    s.insert(i);
                }
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hex_layout() {
        let s = PointSet::from_indices(13, [0, 4, 12]);
        assert_eq!(s.to_hex(), "1011");
        assert_eq!(PointSet::from_hex(13, "1011").unwrap(), s);
        assert!(PointSet::from_hex(13, "2000").is_err());
    }

    #[test]
    fn complement_respects_universe() {
        let s = LineSet::from_indices(70, [1, 69]);
        let c = s.complement();
        assert_eq!(c.count(), 68);
        assert!(!c.contains(69));
        assert_eq!(LineSet::full(70).count(), 70);
    }

    proptest! {
        #[test]
        fn hex_round_trip(len in 1usize..300, seed in any::<u64>()) {
            let idx: Vec<usize> = (0..len).filter(|i| (seed.rotate_left(*i as u32 % 64) ^ *i as u64) % 3 == 0).collect();
            let s = PointSet::from_indices(len, idx.iter().copied());
            prop_assert_eq!(PointSet::from_hex(len, &s.to_hex()).unwrap(), s.clone());
            prop_assert_eq!(s.to_vec(), idx);
        }

        #[test]
        fn xor_count_identity(len in 1usize..200, a in prop::collection::vec(any::<bool>(), 200), b in prop::collection::vec(any::<bool>(), 200)) {
            let x = PointSet::from_indices(len, (0..len).filter(|&i| a[i]));
            let y = PointSet::from_indices(len, (0..len).filter(|&i| b[i]));
            prop_assert_eq!(x.xor(&y).count(), x.count() + y.count() - 2 * x.intersection_count(&y));
        }
    }
}
