//! Distance-3 cyclic (C-Code) and quasi-cyclic lowest-density MDS array
//! codes for double-erasure protection.
//!
//! A C-Code of length `2n` is an `n x 2n` array: the first `n - 1` rows hold
//! information blocks, the last row holds parity. Every information block is
//! an edge `{x, y}` over the parity vertices `Z_2n` and is XORed into parity
//! `p_x` and `p_y`. Column `i` is the base column shifted by `i`, so a code is
//! fully described by its first column, which is always an even starter in
//! `(Z_2n, +)`.
//!
//! The crate is organized bottom-up:
//!
//! * [`groups`]: primality, generators and discrete logs in `Z_p^*`.
//! * [`starters`]: even starters, multiplicative starters, even
//!   multi-starters and the infinite families built from them.
//! * [`factorization`]: (quasi-)bipyramidal one-factorizations and the
//!   Hamiltonian-cycle perfection test.
//! * [`code`]: array codes, column expansion, twins and the graph MDS check.
//! * [`matrix`]: GF(2) parity-check matrices and the algebraic MDS check.
//! * [`codec`]: stripe encoding, scrubbing and two-erasure peeling decode.
//! * [`search`]: exhaustive even-starter enumeration and code counting.
//!
//! Everything here is `no_std` with `alloc`; file formats, timing and the
//! command-line front end live in the `ccode` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod code;
pub mod codec;
mod error;
pub mod factorization;
pub mod groups;
pub mod matrix;
pub mod search;
pub mod starters;

pub use code::{ArrayCode, BCode, Family};
pub use codec::{Codec, ErasurePattern, Stripe};
pub use error::{Error, Result};
pub use factorization::{OneFactor, OneFactorization, Vertex};
pub use groups::PrimeField;
pub use matrix::BitMatrix;
pub use starters::{EvenStarter, MultStarter, MultiStarter, Pair};
