//! Dense matrices over GF(2) with at most 64 columns, one `u64` per row.
//!
//! Bit `j` of a row word is column `j`. Vectors are `u64` words with the
//! same convention.

use crate::error::{Error, Result};

pub const MAX_COLS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<u64>,
    cols: usize,
}

/// Word with the low `n` bits set.
pub(crate) fn low_mask(n: usize) -> u64 {
    col_mask(n)
}

fn col_mask(cols: usize) -> u64 {
    if cols >= 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= MAX_COLS, "at most {MAX_COLS} columns");
        Self { rows: vec![0; rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i] = 1 << i;
        }
        m
    }

    /// Builds from row words; bits at or above `cols` must be clear.
    pub fn from_words(words: Vec<u64>, cols: usize) -> Result<Self> {
        if cols > MAX_COLS {
            return Err(Error::Dimension(format!("{cols} columns exceeds {MAX_COLS}")));
        }
        if words.iter().any(|w| w & !col_mask(cols) != 0) {
            return Err(Error::Dimension(format!("row has bits beyond column {cols}")));
        }
        Ok(Self { rows: words, cols })
    }

    /// Builds from rows of 0/1 entries; every row must have `cols` entries.
    pub fn from_bit_rows(bit_rows: &[Vec<u8>], cols: usize) -> Result<Self> {
        let mut words = Vec::with_capacity(bit_rows.len());
        for (i, row) in bit_rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            let mut w = 0u64;
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => w |= 1 << j,
                    other => return Err(Error::InvalidInput(format!("entry {other} is not a bit"))),
                }
            }
            words.push(w);
        }
        Self::from_words(words, cols)
    }

    pub fn to_bit_rows(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|&w| (0..self.cols).map(|j| ((w >> j) & 1) as u8).collect())
            .collect()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (u64::from((r & v).count_ones() & 1) << i))
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.nrows(), "inner dimensions differ");
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                (0..self.cols)
                    .filter(|&k| (r >> k) & 1 == 1)
                    .fold(0, |acc, k| acc ^ other.rows[k])
            })
            .collect();
        BitMatrix { rows, cols: other.cols }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (i, &r) in self.rows.iter().enumerate() {
            for j in 0..self.cols {
                if (r >> j) & 1 == 1 {
                    t.rows[j] |= 1 << i;
                }
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "column counts differ");
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        BitMatrix { rows, cols: self.cols }
    }

    /// Places `other`'s columns to the right of `self`'s.
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.nrows(), other.nrows(), "row counts differ");
        let rows = self.rows.iter().zip(&other.rows).map(|(&a, &b)| a | (b << self.cols)).collect();
        BitMatrix::zeros(0, self.cols + other.cols).with_rows(rows)
    }

    fn with_rows(mut self, rows: Vec<u64>) -> Self {
        self.rows = rows;
        self
    }

    pub fn rank(&self) -> usize {
        rank_of_words(self.rows.iter().copied())
    }

    /// Rank of the submatrix keeping only the columns in `mask`.
    pub fn masked_rank(&self, mask: u64) -> usize {
        rank_of_words(self.rows.iter().map(|&r| r & mask))
    }

    /// Whether `v` (a length-`cols` row) lies in the row space.
    pub fn row_space_contains(&self, v: u64) -> bool {
        let base = self.rank();
        rank_of_words(self.rows.iter().copied().chain(std::iter::once(v))) == base
    }
}

/// Rank of the span of `words` by elimination on leading bits.
pub fn rank_of_words(words: impl IntoIterator<Item = u64>) -> usize {
    // basis[b] holds a vector whose highest set bit is b.
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for mut w in words {
        while w != 0 {
            let b = 63 - w.leading_zeros() as usize;
            if basis[b] == 0 {
                basis[b] = w;
                rank += 1;
                break;
            }
            w ^= basis[b];
        }
    }
    rank
}

/// Solves `M z = o` for observations of a fixed matrix `M`.
///
/// Elimination is done once; each [`LinearDecoder::solve`] applies the
/// recorded row operations to the observation and reads off a solution with
/// free variables set to zero.
#[derive(Clone, Debug)]
pub struct LinearDecoder {
    /// `transform · M` is in reduced row echelon form.
    transform: BitMatrix,
    pivots: Vec<usize>,
}

impl LinearDecoder {
    pub fn new(m: &BitMatrix) -> Self {
        let n = m.nrows();
        let mut rows = m.rows.clone();
        let mut ops = BitMatrix::identity(n).rows;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.ncols() {
            let Some(p) = (r..n).find(|&i| (rows[i] >> c) & 1 == 1) else {
                continue;
            };
            rows.swap(r, p);
            ops.swap(r, p);
            for i in 0..n {
                if i != r && (rows[i] >> c) & 1 == 1 {
                    rows[i] ^= rows[r];
                    ops[i] ^= ops[r];
                }
            }
            pivots.push(c);
            r += 1;
            if r == n {
                break;
            }
        }
        Self {
            transform: BitMatrix { rows: ops, cols: n },
            pivots,
        }
    }

    /// A solution of `M z = o`, or `None` if `o` is outside the column space.
    pub fn solve(&self, o: u64) -> Option<u64> {
        let reduced = self.transform.mul_vec(o);
        let r = self.pivots.len();
        if reduced.checked_shr(r as u32).unwrap_or(0) != 0 {
            return None;
        }
        Some(
            self.pivots
                .iter()
                .enumerate()
                .filter(|&(i, _)| (reduced >> i) & 1 == 1)
                .fold(0, |z, (_, &c)| z | (1 << c)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_small_cases() {
        assert_eq!(BitMatrix::identity(5).rank(), 5);
        assert_eq!(BitMatrix::zeros(3, 4).rank(), 0);
        let m = BitMatrix::from_bit_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], 3).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.masked_rank(0b001), 1);
    }

    #[test]
    fn bit_rows_round_trip_and_validation() {
        let rows = vec![vec![1, 0, 1], vec![0, 0, 1]];
        let m = BitMatrix::from_bit_rows(&rows, 3).unwrap();
        assert_eq!(m.to_bit_rows(), rows);
        assert!(BitMatrix::from_bit_rows(&[vec![1, 0]], 3).is_err());
        assert!(BitMatrix::from_bit_rows(&[vec![2, 0, 0]], 3).is_err());
    }

    #[test]
    fn stacking() {
        let a = BitMatrix::from_bit_rows(&[vec![1, 0], vec![0, 1]], 2).unwrap();
        let b = BitMatrix::from_bit_rows(&[vec![1], vec![1]], 1).unwrap();
        assert_eq!(a.hstack(&b).to_bit_rows(), vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(a.vstack(&a).nrows(), 4);
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
        prop::collection::vec(0u64..(1 << cols), rows).prop_map(move |w| BitMatrix::from_words(w, cols).unwrap())
    }

    proptest! {
        #[test]
        fn solve_recovers_a_preimage(m in matrix(6, 5), z in 0u64..32) {
            let o = m.mul_vec(z);
            let d = LinearDecoder::new(&m);
            let sol = d.solve(o).expect("o is in the column space");
            prop_assert_eq!(m.mul_vec(sol), o);
        }

        #[test]
        fn rank_matches_transpose(m in matrix(5, 7)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn product_is_associative_on_vectors(a in matrix(4, 5), b in matrix(5, 3), v in 0u64..8) {
            prop_assert_eq!(a.mul(&b).mul_vec(v), a.mul_vec(b.mul_vec(v)));
        }
    }
}
