//! Dense linear algebra over the two-element field.

use std::collections::BTreeMap;
use std::fmt;

/// Bit vector over Z/2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Z2Vec {
    len: usize,
    words: Vec<u64>,
}

impl Z2Vec {
    pub fn zeros(len: usize) -> Self {
        Z2Vec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Z2Vec::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Z2Vec::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Z2Vec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Dot product over Z/2.
    pub fn dot(&self, other: &Z2Vec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn lowest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
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
}

/// Column-stored matrix over Z/2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Z2Matrix {
    rows: usize,
    cols: Vec<Z2Vec>,
}

impl Z2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Z2Matrix {
            rows,
            cols: vec![Z2Vec::zeros(rows); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Z2Matrix {
            rows: n,
            cols: (0..n).map(|i| Z2Vec::unit(n, i)).collect(),
        }
    }

    pub fn from_columns(rows: usize, cols: Vec<Z2Vec>) -> Self {
        assert!(cols.iter().all(|c| c.len() == rows), "column length mismatch");
        Z2Matrix { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cols[col].get(row)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.cols[col].set(row, value);
    }

    pub fn column(&self, col: usize) -> &Z2Vec {
        &self.cols[col]
    }

    pub fn columns(&self) -> &[Z2Vec] {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Z2Vec::is_zero)
    }

    pub fn rank(&self) -> usize {
        let mut reducer = Reducer::new(self.rows, 0);
        self.cols
            .iter()
            .filter(|&c| reducer.insert(c.clone(), Z2Vec::zeros(0)))
            .count()
    }

    pub fn apply(&self, v: &Z2Vec) -> Z2Vec {
        assert_eq!(v.len(), self.cols(), "dimension mismatch");
        let mut out = Z2Vec::zeros(self.rows);
        for j in v.ones() {
            out.xor_assign(&self.cols[j]);
        }
        out
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Z2Matrix) -> Z2Matrix {
        assert_eq!(self.cols(), rhs.rows, "dimension mismatch");
        Z2Matrix {
            rows: self.rows,
            cols: rhs.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn transpose(&self) -> Z2Matrix {
        let mut t = Z2Matrix::zeros(self.cols(), self.rows);
        for (j, c) in self.cols.iter().enumerate() {
            for i in c.ones() {
                t.set(j, i, true);
            }
        }
        t
    }
}

impl fmt::Display for Z2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: String = (0..self.cols())
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Incremental column echelon form keyed by lowest set bit.
///
/// Every stored vector carries a tag recording which tracked generators it
/// is a combination of, so reducing a vector also yields its coordinates.
#[derive(Clone, Debug)]
pub struct Reducer {
    len: usize,
    tag_len: usize,
    pivots: BTreeMap<usize, (Z2Vec, Z2Vec)>,
}

impl Reducer {
    pub fn new(len: usize, tag_len: usize) -> Self {
        Reducer {
            len,
            tag_len,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Grows the tag space, padding stored tags with zeros.
    pub fn set_tag_len(&mut self, tag_len: usize) {
        assert!(tag_len >= self.tag_len);
        for (_, tag) in self.pivots.values_mut() {
            let mut grown = Z2Vec::zeros(tag_len);
            for i in tag.ones() {
                grown.set(i, true);
            }
            *tag = grown;
        }
        self.tag_len = tag_len;
    }

    /// Reduces `v` against the stored pivots, accumulating tags into `tag`.
    pub fn reduce(&self, mut v: Z2Vec, mut tag: Z2Vec) -> (Z2Vec, Z2Vec) {
        assert_eq!(v.len(), self.len);
        while let Some(p) = v.lowest_one() {
            match self.pivots.get(&p) {
                Some((b, bt)) => {
                    v.xor_assign(b);
                    tag.xor_assign(bt);
                }
                None => break,
            }
        }
        (v, tag)
    }

    /// Reduces and stores `v`; returns whether it was independent.
    pub fn insert(&mut self, v: Z2Vec, tag: Z2Vec) -> bool {
        let (v, tag) = self.reduce(v, tag);
        match v.lowest_one() {
            Some(p) => {
                self.pivots.insert(p, (v, tag));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &Z2Vec) -> bool {
        self.reduce(v.clone(), Z2Vec::zeros(self.tag_len)).0.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn vec_basics() {
        let mut v = Z2Vec::zeros(130);
        assert!(v.is_zero());
        v.set(3, true);
        v.set(129, true);
        assert_eq!(v.lowest_one(), Some(3));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 129]);
        v.flip(3);
        assert_eq!(v.lowest_one(), Some(129));
        assert_eq!(v.count_ones(), 1);
    }

    #[test]
    fn rank_small() {
        let m = Z2Matrix::from_columns(
            3,
            vec![
                Z2Vec::from_ones(3, [0, 1]),
                Z2Vec::from_ones(3, [1, 2]),
                Z2Vec::from_ones(3, [0, 2]),
            ],
        );
        assert_eq!(m.rank(), 2);
        assert_eq!(Z2Matrix::identity(5).rank(), 5);
        assert_eq!(Z2Matrix::zeros(4, 0).rank(), 0);
    }

    fn brute_rank(cols: &[u16], rows: usize) -> usize {
        // size of the span, by enumeration of all subsets
        let mut span = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << cols.len()) {
            let mut acc = 0u16;
            for (j, c) in cols.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    acc ^= c;
                }
            }
            span.insert(acc & ((1u32 << rows) - 1) as u16);
        }
        span.len().trailing_zeros() as usize
    }

    proptest! {
        #[test]
        fn rank_matches_span_enumeration(cols in prop::collection::vec(0u16..256, 0..8)) {
            let m = Z2Matrix::from_columns(8, cols.iter().map(|&c| {
                Z2Vec::from_ones(8, (0..8).filter(|i| c >> i & 1 == 1))
            }).collect());
            prop_assert_eq!(m.rank(), brute_rank(&cols, 8));
        }

        #[test]
        fn transpose_preserves_rank(cols in prop::collection::vec(0u16..64, 0..7)) {
            let m = Z2Matrix::from_columns(6, cols.iter().map(|&c| {
                Z2Vec::from_ones(6, (0..6).filter(|i| c >> i & 1 == 1))
            }).collect());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
