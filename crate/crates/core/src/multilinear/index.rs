//! Increasing multi-indices stored as bitmasks over `1..=n`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{AlgebraError, Result};

pub const MAX_DIM: usize = 8;

/// Strictly increasing index set; bit `i-1` stands for index `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(u16);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// From a strictly increasing list of 1-based indices.
    pub fn new(indices: &[usize], dim: usize) -> Result<Self> {
        let mut bits = 0u16;
        let mut last = 0;
        for &i in indices {
            if i == 0 || i > dim {
                return Err(AlgebraError::IndexOutOfRange { index: i, dim });
            }
            if i <= last {
                return Err(AlgebraError::NotIncreasing(indices.to_vec()));
            }
            last = i;
            bits |= 1 << (i - 1);
        }
        Ok(MultiIndex(bits))
    }

    pub fn from_bits(bits: u16) -> Self {
        MultiIndex(bits)
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(1 << (i - 1))
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && self.0 & (1 << (i - 1)) != 0
    }

    pub fn indices(self) -> Vec<usize> {
        (1..=16).filter(|&i| self.contains(i)).collect()
    }

    pub fn max(self) -> usize {
        16 - self.0.leading_zeros() as usize
    }

    pub fn is_disjoint(self, other: MultiIndex) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: MultiIndex) -> MultiIndex {
        MultiIndex(self.0 | other.0)
    }

    pub fn remove(self, i: usize) -> MultiIndex {
        MultiIndex(self.0 & !(1 << (i - 1)))
    }

    pub fn complement(self, dim: usize) -> MultiIndex {
        MultiIndex(!self.0 & ((1u16 << dim) - 1))
    }

    pub fn is_subset(self, other: MultiIndex) -> bool {
        self.0 & !other.0 == 0
    }

    /// Number of elements of `self` strictly below `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u16 << (i - 1)) - 1)).count_ones() as usize
    }

    /// Sign of the shuffle taking `self ++ other` (each increasing) to sorted order; 0 if they overlap.
    pub fn merge_sign(self, other: MultiIndex) -> i32 {
        if !self.is_disjoint(other) {
            return 0;
        }
        let mut inversions = 0;
        for j in other.indices() {
            inversions += self.len() - self.count_below(j);
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All `k`-subsets of `1..=n` in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> =
            (0u32..(1 << n)).filter(|b| b.count_ones() as usize == k).map(|b| MultiIndex(b as u16)).collect();
        out.sort();
        out
    }

    /// Lexicographic position among the `k`-subsets of `1..=n`.
    pub fn position(self, n: usize) -> usize {
        let idx = self.indices();
        let k = idx.len();
        let mut pos = 0;
        let mut prev = 0;
        for (t, &i) in idx.iter().enumerate() {
            for j in prev + 1..i {
                pos += binom(n - j, k - t - 1);
            }
            prev = i;
        }
        pos
    }
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Sign of the permutation sorting `seq`; 0 on a repeated entry.
pub fn perm_sign(seq: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            match seq[i].cmp(&seq[j]) {
                Ordering::Greater => s = -s,
                Ordering::Equal => return 0,
                Ordering::Less => {}
            }
        }
    }
    s
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        // shorter sets first, then lexicographic on the sorted lists
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                return Ordering::Equal;
            }
            let t = diff.trailing_zeros();
            // the side holding the lowest differing element is smaller
            if self.0 & (1 << t) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.indices().iter().map(|i| i.to_string()).collect::<String>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_and_positions() {
        let all = MultiIndex::all(7, 3);
        assert_eq!(all.len(), 35);
        assert_eq!(all[0].indices(), vec![1, 2, 3]);
        assert_eq!(all[1].indices(), vec![1, 2, 4]);
        assert_eq!(all[34].indices(), vec![5, 6, 7]);
        for (p, m) in all.iter().enumerate() {
            assert_eq!(m.position(7), p);
        }
        let all8 = MultiIndex::all(8, 4);
        for (p, m) in all8.iter().enumerate() {
            assert_eq!(m.position(8), p);
        }
    }

    #[test]
    fn merge_signs() {
        let a = MultiIndex::new(&[2], 7).unwrap();
        let b = MultiIndex::new(&[1, 3], 7).unwrap();
        assert_eq!(a.merge_sign(b), -1);
        assert_eq!(b.merge_sign(a), -1);
        assert_eq!(a.merge_sign(a), 0);
        assert_eq!(perm_sign(&[2, 1, 3]), -1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(MultiIndex::new(&[2, 1], 7).is_err());
        assert!(MultiIndex::new(&[8], 7).is_err());
        assert!(MultiIndex::new(&[0], 7).is_err());
    }
}
