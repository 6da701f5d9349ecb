//! Modular arithmetic over `Z_p^*`: primality, generators and discrete logs.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Deterministic primality test by trial division.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m < 4 {
        return true;
    }
    if m.is_multiple_of(2) || m.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) || m.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

pub(crate) fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = u128::from(modulus);
    let mut b = u128::from(base) % m;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn distinct_prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Smallest generator of the multiplicative group `Z_p^*`.
///
/// `g` generates the group iff `g^((p-1)/q) != 1` for every prime `q | p - 1`.
pub fn find_generator(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 3 {
        return Err(Error::PrimeTooSmall { p, min: 3 });
    }
    let order = p - 1;
    let factors = distinct_prime_factors(order);
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, order / q, p) != 1))
        .ok_or(Error::NotPrime(p))
}

/// The cyclic group `(Z_p^*, x)` together with a fixed generator and its
/// exponent and logarithm tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    p: usize,
    g: usize,
    /// `exp[i] = g^i mod p` for `i in 0..p-1`.
    exp: Vec<usize>,
    /// `log[x] = i` with `g^i = x`; index 0 is unused.
    log: Vec<usize>,
}

impl PrimeField {
    /// Field over `p` using the smallest generator.
    pub fn new(p: u64) -> Result<Self> {
        let g = find_generator(p)?;
        Self::with_generator(p, g)
    }

    /// Field over `p` using a caller-chosen generator.
    pub fn with_generator(p: u64, g: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 3 {
            return Err(Error::PrimeTooSmall { p, min: 3 });
        }
        let pu = p as usize;
        let gu = g as usize % pu;
        if gu == 0 {
            return Err(Error::OutOfRange {
                value: g as usize,
                modulus: pu,
            });
        }
        let mut exp = Vec::with_capacity(pu - 1);
        let mut log = vec![usize::MAX; pu];
        let mut x = 1usize;
        for i in 0..pu - 1 {
            if log[x] != usize::MAX {
                // g has order i < p - 1
                return Err(Error::NotGenerator { g, p });
            }
            log[x] = i;
            exp.push(x);
            x = x * gu % pu;
        }
        Ok(PrimeField {
            p: pu,
            g: gu,
            exp,
            log,
        })
    }

    pub fn modulus(&self) -> usize {
        self.p
    }

    pub fn generator(&self) -> usize {
        self.g
    }

    /// Order of the multiplicative group, `p - 1`.
    pub fn order(&self) -> usize {
        self.p - 1
    }

    /// `i` in `0..p-1` such that `g^i = x (mod p)`.
    pub fn log(&self, x: usize) -> Result<usize> {
        if x == 0 || x >= self.p {
            return Err(Error::OutOfRange {
                value: x,
                modulus: self.p,
            });
        }
        Ok(self.log[x])
    }

    /// `g^i mod p`, with `i` taken modulo `p - 1`.
    pub fn exp(&self, i: usize) -> usize {
        self.exp[i % (self.p - 1)]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        a * b % self.p
    }

    /// Multiplicative inverse of a non-zero element.
    pub fn inv(&self, x: usize) -> Result<usize> {
        let i = self.log(x)?;
        Ok(self.exp((self.p - 1 - i) % (self.p - 1)))
    }
}

/// Discrete logarithm by table lookup.
pub fn discrete_log(field: &PrimeField, x: usize) -> Result<usize> {
    field.log(x)
}
