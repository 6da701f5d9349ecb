//! GF(2) matrices and the algebraic MDS check on parity-check matrices.
//!
//! The parity-check matrix of a length-`2n` code is `H = (H_0 H_1 ... H_{2n-1})`
//! with each block `2n x n`. Block `k` has one weight-2 column per information
//! edge of `C_k` (in row order) and the unit vector `e_k` last. The code is
//! MDS iff every `(H_m H_k)` is nonsingular.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::code::ArrayCode;
use crate::{Error, Result};

const WORD: usize = 64;

/// Dense row-major GF(2) matrix packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(WORD);
        BitMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of `0`/`1` values.
    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::BadShape("ragged rows"));
            }
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b != 0);
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
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.words[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let w = &mut self.words[r * self.stride + c / WORD];
        let bit = 1u64 << (c % WORD);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        let v = self.get(r, c);
        self.set(r, c, !v);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::BadShape("inner dimensions differ"));
        }
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let dst = i * out.stride;
                    for (w, src) in rhs.row_words(k).iter().enumerate() {
                        out.words[dst + w] ^= src;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self^e` for a square matrix.
    pub fn pow(&self, mut e: usize) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = BitMatrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Columns `start..start + width`.
    pub fn columns(&self, start: usize, width: usize) -> BitMatrix {
        assert!(start + width <= self.cols, "column range out of bounds");
        let mut out = BitMatrix::zeros(self.rows, width);
        for r in 0..self.rows {
            for c in 0..width {
                if self.get(r, start + c) {
                    out.set(r, c, true);
                }
            }
        }
        out
    }

    /// Side-by-side concatenation of matrices with equal row counts.
    pub fn hconcat(parts: &[&BitMatrix]) -> Result<BitMatrix> {
        let rows = parts.first().map_or(0, |m| m.rows);
        if parts.iter().any(|m| m.rows != rows) {
            return Err(Error::BadShape("row counts differ"));
        }
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = BitMatrix::zeros(rows, cols);
        let mut offset = 0;
        for m in parts {
            for r in 0..rows {
                for c in 0..m.cols {
                    if m.get(r, c) {
                        out.set(r, offset + c, true);
                    }
                }
            }
            offset += m.cols;
        }
        Ok(out)
    }

    /// Rank by Gaussian elimination with word-wide row XOR.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(pivot, rank);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.words.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for w in 0..self.stride {
            let v = self.words[src * self.stride + w];
            self.words[dst * self.stride + w] ^= v;
        }
    }

    pub fn is_nonsingular(&self) -> Result<bool> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rank() == self.rows)
    }

    /// `self * v` for a column vector given as bits.
    pub fn mul_vec(&self, v: &[bool]) -> Result<Vec<bool>> {
        if v.len() != self.cols {
            return Err(Error::BadShape("vector length differs from column count"));
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).filter(|&c| v[c] && self.get(r, c)).count() % 2 == 1)
            .collect())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// See [`BitMatrix::is_nonsingular`].
pub fn is_nonsingular(m: &BitMatrix) -> Result<bool> {
    m.is_nonsingular()
}

/// The elemental cyclic matrix `E`: `e_j -> e_{j+1 mod size}`, i.e. ones on
/// the subdiagonal and in the top-right corner.
pub fn elemental_cyclic(size: usize) -> Result<BitMatrix> {
    if size < 4 || !size.is_multiple_of(2) {
        return Err(Error::BadShape("size must be even and at least 4"));
    }
    let mut e = BitMatrix::zeros(size, size);
    e.set(0, size - 1, true);
    for i in 1..size {
        e.set(i, i - 1, true);
    }
    Ok(e)
}

/// `H = (H_0 ... H_{2n-1})` built directly from the expanded columns.
///
/// For `kappa > 1` the same layout is produced; only the cyclic relation
/// between blocks changes (see [`verify_parity_check`]).
pub fn build_parity_check(code: &ArrayCode) -> BitMatrix {
    let m = code.length();
    let n = code.rows();
    let mut h = BitMatrix::zeros(m, m * n);
    for (k, column) in code.expand_columns().iter().enumerate() {
        for (j, p) in column.iter().enumerate() {
            h.set(p.lo(), k * n + j, true);
            h.set(p.hi(), k * n + j, true);
        }
        h.set(k, k * n + n - 1, true);
    }
    h
}

/// Checks a C-Code parity-check matrix of the given length:
///
/// 1. the last column of `H_k` is `e_k`;
/// 2. `H_k = E^k H_0`;
/// 3. every row has weight `2n - 1`;
/// 4. every `(H_m H_k)` with `m < k` is nonsingular.
pub fn verify_def2(h: &BitMatrix, length: usize) -> Result<bool> {
    verify_parity_check(h, length, 1)
}

/// [`verify_def2`] generalized to kappa-quasi codes, where condition 2
/// becomes `H_{i + kappa t} = E^{kappa t} H_i` for `i < kappa`.
pub fn verify_parity_check(h: &BitMatrix, length: usize, kappa: usize) -> Result<bool> {
    if length < 4 || !length.is_multiple_of(2) {
        return Err(Error::BadShape("length must be even and at least 4"));
    }
    if kappa == 0 || !length.is_multiple_of(kappa) {
        return Err(Error::BadKappa {
            kappa,
            modulus: length,
        });
    }
    let n = length / 2;
    if h.rows() != length || h.cols() != length * n {
        return Err(Error::BadShape("expected 2n x 2n*n"));
    }
    let blocks: Vec<BitMatrix> = (0..length).map(|k| h.columns(k * n, n)).collect();

    // condition 1
    for (k, block) in blocks.iter().enumerate() {
        if (0..length).any(|r| block.get(r, n - 1) != (r == k)) {
            return Ok(false);
        }
    }

    // condition 2
    let e = elemental_cyclic(length)?;
    let step = e.pow(kappa)?;
    let mut power = BitMatrix::identity(length);
    for t in 0..length / kappa {
        for i in 0..kappa {
            if power.mul(&blocks[i])? != blocks[i + kappa * t] {
                return Ok(false);
            }
        }
        power = step.mul(&power)?;
    }

    // condition 3
    if (0..length).any(|r| h.row_weight(r) != length - 1) {
        return Ok(false);
    }

    // condition 4
    for a in 0..length {
        for b in a + 1..length {
            if !BitMatrix::hconcat(&[&blocks[a], &blocks[b]])?.is_nonsingular()? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
