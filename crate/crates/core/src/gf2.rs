//! Dense bit matrices over GF(2).
//!
//! Rows are packed into 64-bit words; bits past `cols` in the last word of a
//! row are always zero so that whole-word operations never see garbage.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
pub(crate) fn get_bit(words: &[u64], i: usize) -> bool {
    words[i / WORD] >> (i % WORD) & 1 == 1
}

#[inline]
pub(crate) fn set_bit(words: &mut [u64], i: usize, v: bool) {
    let mask = 1u64 << (i % WORD);
    if v {
        words[i / WORD] |= mask;
    } else {
        words[i / WORD] &= !mask;
    }
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

#[inline]
pub(crate) fn popcount(words: &[u64]) -> u32 {
    words.iter().map(|w| w.count_ones()).sum()
}

/// Indices of set bits, ascending.
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * WORD + b)
        })
    })
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, bits: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from 0/1 rows; every row must have the same length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(r, c, true),
                    _ => return Err(Error::Parse(format!("entry ({r},{c}) is {v}, not 0/1"))),
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        get_bit(self.row(r), c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        let s = self.stride;
        set_bit(&mut self.bits[r * s..(r + 1) * s], c, v);
    }

    /// Packed words of row `r`.
    pub fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    /// Appends a row given as packed words (extra high bits are masked off).
    pub fn push_row(&mut self, words: &[u64]) {
        let start = self.bits.len();
        self.bits.resize(start + self.stride, 0);
        let n = words.len().min(self.stride);
        self.bits[start..start + n].copy_from_slice(&words[..n]);
        if self.cols % WORD != 0 && self.stride > 0 {
            let last = start + self.stride - 1;
            self.bits[last] &= (1u64 << (self.cols % WORD)) - 1;
        }
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in ones(self.row(r)) {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> u32 {
        popcount(&self.bits)
    }

    /// Drops all-zero rows and columns, returning the compacted matrix and the
    /// surviving row and column indices.
    pub fn compact(&self) -> (BitMatrix, Vec<usize>, Vec<usize>) {
        let keep_rows: Vec<usize> = (0..self.rows).filter(|&r| self.row(r).iter().any(|&w| w != 0)).collect();
        let mut used = vec![0u64; self.stride];
        for r in 0..self.rows {
            for (u, w) in used.iter_mut().zip(self.row(r)) {
                *u |= *w;
            }
        }
        let keep_cols: Vec<usize> = ones(&used).collect();
        let m = Self::from_fn(keep_rows.len(), keep_cols.len(), |r, c| self.get(keep_rows[r], keep_cols[c]));
        (m, keep_rows, keep_cols)
    }

    pub fn rank(&self) -> usize {
        rank_gf2(self)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

/// 0/1 text grid, one row per line.
impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            if r + 1 < self.rows {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Rank over GF(2) by Gaussian elimination on a copy of the rows.
///
/// Pivots are taken column by column, first nonzero row first.
pub fn rank_gf2(m: &BitMatrix) -> usize {
    let mut bits = m.bits.clone();
    rank_in_place(&mut bits, m.rows, m.stride, m.cols)
}

/// Eliminates rows stored contiguously with `stride` words each, returning the
/// rank. The buffer is left in row-echelon form (pivot rows first).
pub(crate) fn rank_in_place(bits: &mut [u64], rows: usize, stride: usize, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let w = col / WORD;
        let mask = 1u64 << (col % WORD);
        let Some(p) = (rank..rows).find(|&r| bits[r * stride + w] & mask != 0) else {
            continue;
        };
        if p != rank {
            for k in 0..stride {
                bits.swap(p * stride + k, rank * stride + k);
            }
        }
        let (head, tail) = bits.split_at_mut((rank + 1) * stride);
        let pivot = &head[rank * stride + w..(rank + 1) * stride];
        for r in 0..rows - rank - 1 {
            let row = &mut tail[r * stride..(r + 1) * stride];
            if row[w] & mask != 0 {
                xor_into(&mut row[w..], pivot);
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of single-word rows (at most 64 columns), destroying the input.
pub(crate) fn rank_words(rows: &mut [u64]) -> u32 {
    let mut rank = 0;
    let mut live = rows.len();
    let mut i = 0;
    while i < live {
        let p = rows[i];
        if p == 0 {
            live -= 1;
            rows.swap(i, live);
            continue;
        }
        rank += 1;
        let low = p & p.wrapping_neg();
        for r in rows[i + 1..live].iter_mut() {
            if *r & low != 0 {
                *r ^= p;
            }
        }
        i += 1;
    }
    rank
}

/// The cut block of the adjacency matrix: rows are the vertices of `a`, columns
/// the vertices of its complement, both ascending; an entry is set iff the edge
/// crosses the cut.
pub fn cross_submatrix(g: &Graph, a: &[usize]) -> Result<BitMatrix> {
    let in_a = g.vertex_mask(a)?;
    let count = popcount(&in_a) as usize;
    if count == 0 || count == g.n() {
        return Err(Error::TrivialCut);
    }
    let rows: Vec<usize> = ones(&in_a).collect();
    let cols: Vec<usize> = (0..g.n()).filter(|&v| !get_bit(&in_a, v)).collect();
    Ok(BitMatrix::from_fn(rows.len(), cols.len(), |r, c| g.has_edge(rows[r], cols[c])))
}
