//! Binary container for one encoded stripe.
//!
//! Layout, integers little-endian `u32`:
//!
//! | offset | size | field                                  |
//! |--------|------|----------------------------------------|
//! | 0      | 4    | magic `CCST`                           |
//! | 4      | 4    | version, currently 1                   |
//! | 8      | 4    | code length `2n`                       |
//! | 12     | 4    | block size `B` in bytes                |
//! | 16     | ..   | `2n * n * B` cell bytes, column-major  |

use ccode_core::Stripe;

pub const MAGIC: &[u8; 4] = b"CCST";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 16;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum StripeFileError {
    #[error("not a stripe file (bad magic)")]
    BadMagic,
    #[error("unsupported stripe file version {0}")]
    BadVersion(u32),
    #[error("stripe file truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("stripe file has {0} trailing bytes")]
    Trailing(usize),
    #[error("{0}")]
    Core(#[from] ccode_core::Error),
}

pub fn write_stripe(stripe: &Stripe) -> Vec<u8> {
    let cells = stripe.as_bytes();
    let mut out = Vec::with_capacity(HEADER_LEN + cells.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(stripe.length() as u32).to_le_bytes());
    out.extend_from_slice(&(stripe.block_size() as u32).to_le_bytes());
    out.extend_from_slice(cells);
    out
}

pub fn read_stripe(bytes: &[u8]) -> Result<Stripe, StripeFileError> {
    if bytes.len() < HEADER_LEN {
        return Err(StripeFileError::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    if &bytes[..4] != MAGIC {
        return Err(StripeFileError::BadMagic);
    }
    let word = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let version = word(4);
    if version != VERSION {
        return Err(StripeFileError::BadVersion(version));
    }
    let length = word(8) as usize;
    let block_size = word(12) as usize;
    Stripe::check_geometry(length, block_size)?;
    let expected = HEADER_LEN + length * (length / 2) * block_size;
    if bytes.len() < expected {
        return Err(StripeFileError::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(StripeFileError::Trailing(bytes.len() - expected));
    }
    Ok(Stripe::from_bytes(
        length,
        block_size,
        bytes[HEADER_LEN..].to_vec(),
    )?)
}
