//! Stripe encoding and two-erasure peeling decode.
//!
//! A stripe holds `n` rows by `2n` columns of `B`-byte blocks, stored
//! column-major: column 0 rows `0..n`, then column 1, and so on. Rows
//! `0..n-1` carry information, row `n - 1` carries the parity `p_i` of
//! column `i`. The information block in row `j` of column `i` is edge `j` of
//! `C_i` and is XORed into both of its endpoint parities.
//!
//! Decoding treats every surviving parity as an equation over the unknown
//! information blocks of the erased columns. When the code satisfies the MDS
//! graph condition the unknown edges form a union of paths, each with an end
//! at a surviving parity, so repeatedly solving equations with exactly one
//! unknown always finishes.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::code::ArrayCode;
use crate::starters::Pair;
use crate::{Error, Result};

fn xor_into(dst: &mut [u8], src: &[u8]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// One `n x 2n` array of blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stripe {
    length: usize,
    rows: usize,
    block_size: usize,
    cells: Vec<u8>,
}

impl Stripe {
    pub fn zeroed(length: usize, block_size: usize) -> Result<Self> {
        Self::check_geometry(length, block_size)?;
        let rows = length / 2;
        Ok(Stripe {
            length,
            rows,
            block_size,
            cells: vec![0; length * rows * block_size],
        })
    }

    /// Wraps column-major cell bytes.
    pub fn from_bytes(length: usize, block_size: usize, cells: Vec<u8>) -> Result<Self> {
        Self::check_geometry(length, block_size)?;
        let rows = length / 2;
        if cells.len() != length * rows * block_size {
            return Err(Error::ShapeMismatch(
                "cell bytes do not fill an n x 2n stripe",
            ));
        }
        Ok(Stripe {
            length,
            rows,
            block_size,
            cells,
        })
    }

    /// Rejects odd or too-short lengths and empty blocks.
    pub fn check_geometry(length: usize, block_size: usize) -> Result<()> {
        if length < 4 || !length.is_multiple_of(2) {
            return Err(Error::BadModulus(length));
        }
        if block_size == 0 {
            return Err(Error::ShapeMismatch("block size must be at least one byte"));
        }
        Ok(())
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.cells
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.cells
    }

    fn offset(&self, col: usize, row: usize) -> usize {
        assert!(col < self.length && row < self.rows, "cell out of range");
        (col * self.rows + row) * self.block_size
    }

    pub fn cell(&self, col: usize, row: usize) -> &[u8] {
        let o = self.offset(col, row);
        &self.cells[o..o + self.block_size]
    }

    pub fn cell_mut(&mut self, col: usize, row: usize) -> &mut [u8] {
        let o = self.offset(col, row);
        &mut self.cells[o..o + self.block_size]
    }

    pub fn parity(&self, col: usize) -> &[u8] {
        self.cell(col, self.rows - 1)
    }

    /// Zeroes every cell of a column, the way a lost disk is presented to
    /// [`Codec::decode`].
    pub fn erase_column(&mut self, col: usize) {
        let o = self.offset(col, 0);
        let len = self.rows * self.block_size;
        self.cells[o..o + len].fill(0);
    }

    /// The information cells, column-major, without the parity row.
    pub fn info_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.length * (self.rows - 1) * self.block_size);
        for col in 0..self.length {
            let o = self.offset(col, 0);
            out.extend_from_slice(&self.cells[o..o + (self.rows - 1) * self.block_size]);
        }
        out
    }
}

/// Up to two erased column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasurePattern {
    erased: Vec<usize>,
}

impl ErasurePattern {
    pub fn new(erased: &[usize], length: usize) -> Result<Self> {
        if erased.len() > 2 {
            return Err(Error::TooManyErasures(erased.len()));
        }
        let mut v = erased.to_vec();
        v.sort_unstable();
        if let Some(&c) = v.iter().find(|&&c| c >= length) {
            return Err(Error::OutOfRange {
                value: c,
                modulus: length,
            });
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::ShapeMismatch("erased column listed twice"));
        }
        Ok(ErasurePattern { erased: v })
    }

    pub fn none() -> Self {
        ErasurePattern { erased: Vec::new() }
    }

    pub fn columns(&self) -> &[usize] {
        &self.erased
    }

    pub fn contains(&self, col: usize) -> bool {
        self.erased.contains(&col)
    }
}

/// Encoder/decoder for one code, with the column edges expanded once.
#[derive(Debug, Clone)]
pub struct Codec {
    length: usize,
    rows: usize,
    columns: Vec<Vec<Pair>>,
    /// For each parity vertex, the `(col, row)` cells incident to it.
    incident: Vec<Vec<(usize, usize)>>,
}

impl Codec {
    pub fn new(code: &ArrayCode) -> Self {
        let length = code.length();
        let columns = code.expand_columns();
        let mut incident = vec![Vec::new(); length];
        for (col, edges) in columns.iter().enumerate() {
            for (row, p) in edges.iter().enumerate() {
                incident[p.lo()].push((col, row));
                incident[p.hi()].push((col, row));
            }
        }
        Codec {
            length,
            rows: code.rows(),
            columns,
            incident,
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Bytes of information one stripe carries at the given block size.
    pub fn info_capacity(&self, block_size: usize) -> usize {
        self.length * (self.rows - 1) * block_size
    }

    fn check_stripe(&self, stripe: &Stripe) -> Result<()> {
        if stripe.length != self.length {
            return Err(Error::ShapeMismatch(
                "stripe length differs from code length",
            ));
        }
        Ok(())
    }

    /// Lays `info` out column-major into the information rows and fills the
    /// parity row.
    pub fn encode(&self, info: &[u8], block_size: usize) -> Result<Stripe> {
        let mut stripe = Stripe::zeroed(self.length, block_size)?;
        if info.len() != self.info_capacity(block_size) {
            return Err(Error::ShapeMismatch(
                "information size must be 2n(n-1) blocks",
            ));
        }
        let col_bytes = (self.rows - 1) * block_size;
        for (col, chunk) in info.chunks_exact(col_bytes).enumerate() {
            let o = stripe.offset(col, 0);
            stripe.cells[o..o + col_bytes].copy_from_slice(chunk);
        }
        self.fill_parity(&mut stripe)?;
        Ok(stripe)
    }

    /// Recomputes every parity block from the information blocks.
    pub fn fill_parity(&self, stripe: &mut Stripe) -> Result<()> {
        self.check_stripe(stripe)?;
        for x in 0..self.length {
            let p = self.parity_of(stripe, x);
            stripe.cell_mut(x, self.rows - 1).copy_from_slice(&p);
        }
        Ok(())
    }

    fn parity_of(&self, stripe: &Stripe, x: usize) -> Vec<u8> {
        let mut acc = vec![0u8; stripe.block_size];
        for &(col, row) in &self.incident[x] {
            xor_into(&mut acc, stripe.cell(col, row));
        }
        acc
    }

    /// Parity indices whose stored block differs from the XOR of its
    /// incident information blocks.
    pub fn scrub(&self, stripe: &Stripe) -> Result<Vec<usize>> {
        self.check_stripe(stripe)?;
        Ok((0..self.length)
            .filter(|&x| self.parity_of(stripe, x) != stripe.parity(x))
            .collect())
    }

    /// Overwrites one information block and patches the two parities it
    /// feeds. Returns the parity columns touched.
    pub fn update(
        &self,
        stripe: &mut Stripe,
        col: usize,
        row: usize,
        data: &[u8],
    ) -> Result<[usize; 2]> {
        self.check_stripe(stripe)?;
        if row + 1 >= self.rows || col >= self.length {
            return Err(Error::ShapeMismatch("not an information cell"));
        }
        if data.len() != stripe.block_size {
            return Err(Error::ShapeMismatch("block size differs"));
        }
        let mut delta = stripe.cell(col, row).to_vec();
        xor_into(&mut delta, data);
        stripe.cell_mut(col, row).copy_from_slice(data);
        let edge = self.columns[col][row];
        let parity_row = self.rows - 1;
        for x in [edge.lo(), edge.hi()] {
            xor_into(stripe.cell_mut(x, parity_row), &delta);
        }
        Ok([edge.lo(), edge.hi()])
    }

    /// Rebuilds the erased columns in place by peeling. Cell contents of
    /// erased columns are ignored.
    pub fn decode(&self, stripe: &mut Stripe, pattern: &ErasurePattern) -> Result<()> {
        self.check_stripe(stripe)?;
        if let Some(&c) = pattern.columns().iter().find(|&&c| c >= self.length) {
            return Err(Error::OutOfRange {
                value: c,
                modulus: self.length,
            });
        }
        if pattern.columns().is_empty() {
            return Ok(());
        }
        let b = stripe.block_size;
        let parity_row = self.rows - 1;
        for &c in pattern.columns() {
            stripe.erase_column(c);
        }

        // unknown information cells and, per surviving parity, its pending ones
        let mut unknown: Vec<(usize, usize)> = Vec::new();
        let mut pending: Vec<Vec<usize>> = vec![Vec::new(); self.length];
        for &c in pattern.columns() {
            for (row, edge) in self.columns[c].iter().enumerate() {
                let id = unknown.len();
                unknown.push((c, row));
                for x in [edge.lo(), edge.hi()] {
                    if !pattern.contains(x) {
                        pending[x].push(id);
                    }
                }
            }
        }

        // acc[x] = p_x ^ (known incident blocks); erased cells are zero
        let mut acc: Vec<Vec<u8>> = vec![Vec::new(); self.length];
        let mut queue = VecDeque::new();
        for x in (0..self.length).filter(|&x| !pattern.contains(x)) {
            let mut a = stripe.cell(x, parity_row).to_vec();
            for &(col, row) in &self.incident[x] {
                xor_into(&mut a, stripe.cell(col, row));
            }
            acc[x] = a;
            if pending[x].len() == 1 {
                queue.push_back(x);
            }
        }

        let mut solved = vec![false; unknown.len()];
        let mut remaining = unknown.len();
        while let Some(x) = queue.pop_front() {
            let Some(&id) = pending[x].iter().find(|&&id| !solved[id]) else {
                continue;
            };
            if pending[x].iter().filter(|&&id| !solved[id]).count() != 1 {
                continue;
            }
            solved[id] = true;
            remaining -= 1;
            let (col, row) = unknown[id];
            let value = core::mem::take(&mut acc[x]);
            stripe.cell_mut(col, row).copy_from_slice(&value);
            let edge = self.columns[col][row];
            let y = edge.other(x).expect("pending cell is incident to x");
            if !pattern.contains(y) {
                xor_into(&mut acc[y], &value);
                if pending[y].iter().filter(|&&id| !solved[id]).count() == 1 {
                    queue.push_back(y);
                }
            }
            acc[x] = vec![0; b];
        }
        if remaining > 0 {
            return Err(Error::Stuck {
                unresolved: remaining,
            });
        }

        for &c in pattern.columns() {
            let p = self.parity_of(stripe, c);
            stripe.cell_mut(c, parity_row).copy_from_slice(&p);
        }
        Ok(())
    }
}

/// One-shot encode; see [`Codec::encode`].
pub fn encode(info: &[u8], code: &ArrayCode, block_size: usize) -> Result<Stripe> {
    Codec::new(code).encode(info, block_size)
}

/// One-shot decode; see [`Codec::decode`].
pub fn decode(stripe: &mut Stripe, code: &ArrayCode, pattern: &ErasurePattern) -> Result<()> {
    Codec::new(code).decode(stripe, pattern)
}

/// One-shot scrub; see [`Codec::scrub`].
pub fn scrub(stripe: &Stripe, code: &ArrayCode) -> Result<Vec<usize>> {
    Codec::new(code).scrub(stripe)
}
