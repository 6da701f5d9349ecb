//! Even starters in `(Z_2n, +)`, even starters in `(Z_p^*, x)` and even
//! multi-starters, with their twins and the infinite families built from
//! primitive roots.
//!
//! All pair-sets are stored canonically: each pair as `(lo, hi)` with
//! `lo < hi`, and the list sorted. Equality and serialization are therefore
//! independent of how the caller wrote the pairs down.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::groups::{is_prime, PrimeField};
use crate::{Error, Result};

/// An unordered pair `{x, y}`, stored with the smaller element first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    lo: usize,
    hi: usize,
}

impl Pair {
    pub fn new(x: usize, y: usize) -> Self {
        if x <= y {
            Pair { lo: x, hi: y }
        } else {
            Pair { lo: y, hi: x }
        }
    }

    pub fn lo(self) -> usize {
        self.lo
    }

    pub fn hi(self) -> usize {
        self.hi
    }

    pub fn contains(self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }

    /// The element paired with `v`, if `v` is in the pair.
    pub fn other(self, v: usize) -> Option<usize> {
        if self.lo == v {
            Some(self.hi)
        } else if self.hi == v {
            Some(self.lo)
        } else {
            None
        }
    }

    /// `{x + k, y + k} mod modulus`.
    pub fn shift(self, k: usize, modulus: usize) -> Pair {
        Pair::new((self.lo + k) % modulus, (self.hi + k) % modulus)
    }

    /// Difference class `min(d, m - d)` with `d = (hi - lo) mod m`.
    pub fn difference_class(self, modulus: usize) -> usize {
        let d = self.hi - self.lo;
        d.min(modulus - d)
    }
}

impl From<(usize, usize)> for Pair {
    fn from((x, y): (usize, usize)) -> Self {
        Pair::new(x, y)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

pub(crate) fn canonical(pairs: impl IntoIterator<Item = Pair>) -> Vec<Pair> {
    let mut v: Vec<Pair> = pairs.into_iter().collect();
    v.sort_unstable();
    v
}

fn check_modulus(modulus: usize) -> Result<()> {
    if modulus < 4 || !modulus.is_multiple_of(2) {
        return Err(Error::BadModulus(modulus));
    }
    Ok(())
}

/// Checks one part of an additive (multi-)starter: `n - 1` pairs of distinct
/// elements of `Z_m`, none equal to `excluded`. Returns the single element
/// other than `excluded` left uncovered, and bumps the difference-class
/// histogram.
fn check_part(
    pairs: &[Pair],
    modulus: usize,
    excluded: usize,
    histogram: &mut [usize],
) -> core::result::Result<usize, &'static str> {
    let n = modulus / 2;
    if pairs.len() != n - 1 {
        return Err("wrong number of pairs");
    }
    let mut seen = vec![false; modulus];
    for p in pairs {
        if p.hi() >= modulus {
            return Err("element out of range");
        }
        for v in [p.lo(), p.hi()] {
            if v == excluded {
                return Err("pair contains the excluded element");
            }
            if seen[v] {
                return Err("element used twice");
            }
            seen[v] = true;
        }
        let c = p.difference_class(modulus);
        if c == n {
            return Err("pair has difference n");
        }
        histogram[c] += 1;
    }
    Ok((0..modulus)
        .find(|&v| v != excluded && !seen[v])
        .expect("2n - 2 of the 2n - 1 candidates are used"))
}

fn check_even_starter(pairs: &[Pair], modulus: usize) -> core::result::Result<usize, &'static str> {
    let n = modulus / 2;
    let mut histogram = vec![0usize; n + 1];
    let missing = check_part(pairs, modulus, 0, &mut histogram)?;
    if histogram[1..n].iter().any(|&c| c != 1) {
        return Err("some difference is not covered exactly once");
    }
    Ok(missing)
}

/// True iff `pairs` is an even starter in `(Z_modulus, +)`: `n - 1` pairs of
/// non-zero elements, all distinct, covering every difference except `0`
/// and `n`.
pub fn validate_even_starter(pairs: &[Pair], modulus: usize) -> Result<bool> {
    check_modulus(modulus)?;
    Ok(check_even_starter(pairs, modulus).is_ok())
}

/// An even starter in `(Z_2n, +)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EvenStarter {
    modulus: usize,
    pairs: Vec<Pair>,
    missing: usize,
}

impl EvenStarter {
    pub fn new(pairs: impl IntoIterator<Item = Pair>, modulus: usize) -> Result<Self> {
        check_modulus(modulus)?;
        let pairs = canonical(pairs);
        let missing = check_even_starter(&pairs, modulus).map_err(Error::InvalidStarter)?;
        Ok(EvenStarter {
            modulus,
            pairs,
            missing,
        })
    }

    /// Convenience constructor from `(x, y)` tuples.
    pub fn from_tuples(pairs: &[(usize, usize)], modulus: usize) -> Result<Self> {
        Self::new(pairs.iter().copied().map(Pair::from), modulus)
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// The one non-zero element of `Z_2n` not covered by any pair (`r`).
    pub fn missing(&self) -> usize {
        self.missing
    }

    /// The twin starter `{{x - r, y - r}}`.
    pub fn twin(&self) -> EvenStarter {
        let m = self.modulus;
        let back = m - self.missing;
        let pairs = canonical(self.pairs.iter().map(|p| p.shift(back, m)));
        // the twin misses -r
        EvenStarter {
            modulus: m,
            pairs,
            missing: back,
        }
    }
}

/// Twin of an even starter; see [`EvenStarter::twin`].
pub fn twin_even_starter(s: &EvenStarter) -> EvenStarter {
    s.twin()
}

impl fmt::Display for EvenStarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_pair_set(f, &self.pairs)
    }
}

fn write_pair_set(f: &mut fmt::Formatter<'_>, pairs: &[Pair]) -> fmt::Result {
    f.write_str("{")?;
    for (i, p) in pairs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{p}")?;
    }
    f.write_str("}")
}

fn check_mult_prime(p: usize) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if p < 5 {
        return Err(Error::PrimeTooSmall {
            p: p as u64,
            min: 5,
        });
    }
    Ok(())
}

fn check_mult_starter(
    pairs: &[Pair],
    field: &PrimeField,
) -> core::result::Result<usize, &'static str> {
    let p = field.modulus();
    let order = p - 1;
    let n = order / 2;
    if pairs.len() != n - 1 {
        return Err("wrong number of pairs");
    }
    let mut seen = vec![false; p];
    let mut covered = vec![false; p];
    for pair in pairs {
        if pair.lo() == 0 || pair.hi() >= p {
            return Err("element outside Z_p^*");
        }
        for v in [pair.lo(), pair.hi()] {
            if v == 1 {
                return Err("pair contains the identity");
            }
            if seen[v] {
                return Err("element used twice");
            }
            seen[v] = true;
        }
        let (x, y) = (pair.lo(), pair.hi());
        let xinv = field.inv(x).expect("non-zero");
        let yinv = field.inv(y).expect("non-zero");
        covered[field.mul(xinv, y)] = true;
        covered[field.mul(x, yinv)] = true;
    }
    if (2..p - 1).any(|i| !covered[i]) {
        return Err("some quotient is not covered");
    }
    Ok((2..p)
        .find(|&v| !seen[v])
        .expect("one non-identity element is unused"))
}

/// True iff `pairs` is an even starter in `(Z_p^*, x)`: `(p-1)/2 - 1` pairs of
/// distinct non-identity elements whose quotients `x^-1 y` and `x y^-1` cover
/// every element except `1` and `p - 1`.
pub fn validate_mult_starter(pairs: &[Pair], p: usize) -> Result<bool> {
    check_mult_prime(p)?;
    let field = PrimeField::new(p as u64)?;
    Ok(check_mult_starter(pairs, &field).is_ok())
}

/// An even starter in the multiplicative group `(Z_p^*, x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultStarter {
    p: usize,
    pairs: Vec<Pair>,
    missing: usize,
}

impl MultStarter {
    pub fn new(pairs: impl IntoIterator<Item = Pair>, p: usize) -> Result<Self> {
        check_mult_prime(p)?;
        let field = PrimeField::new(p as u64)?;
        let pairs = canonical(pairs);
        let missing = check_mult_starter(&pairs, &field).map_err(Error::InvalidStarter)?;
        Ok(MultStarter { p, pairs, missing })
    }

    pub fn from_tuples(pairs: &[(usize, usize)], p: usize) -> Result<Self> {
        Self::new(pairs.iter().copied().map(Pair::from), p)
    }

    pub fn prime(&self) -> usize {
        self.p
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// The non-identity element not covered by any pair.
    pub fn missing(&self) -> usize {
        self.missing
    }

    /// Image under `log_g`: an even starter in `(Z_{p-1}, +)`.
    pub fn log_image(&self, field: &PrimeField) -> Result<EvenStarter> {
        if field.modulus() != self.p {
            return Err(Error::NotCyclicGroup);
        }
        let pairs = self
            .pairs
            .iter()
            .map(|q| Ok(Pair::new(field.log(q.lo())?, field.log(q.hi())?)))
            .collect::<Result<Vec<_>>>()?;
        EvenStarter::new(pairs, self.p - 1)
    }
}

impl fmt::Display for MultStarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_pair_set(f, &self.pairs)
    }
}

/// Pairs `{x, 1 - x}` with both elements outside `excluded`.
fn sum_to_one_pairs(p: usize, excluded: &[usize]) -> Vec<Pair> {
    (2..p)
        .filter_map(|x| {
            let y = (p + 1 - x) % p;
            (x < y && !excluded.contains(&x) && !excluded.contains(&y)).then(|| Pair::new(x, y))
        })
        .collect()
}

/// First family: `{{x, y} : x, y not in {1, 2^-1}, x + y = 1}`.
pub fn family_a(p: usize) -> Result<MultStarter> {
    check_mult_prime(p)?;
    let half = p.div_ceil(2);
    MultStarter::new(sum_to_one_pairs(p, &[1, half]), p)
}

/// Second family: the sum-to-one pairs avoiding `{1, 2^-1, 2, p - 1}`, plus
/// the pair `{2^-1, p - 1}`.
pub fn family_b(p: usize) -> Result<MultStarter> {
    check_mult_prime(p)?;
    let half = p.div_ceil(2);
    let mut pairs = sum_to_one_pairs(p, &[1, half, 2, p - 1]);
    pairs.push(Pair::new(half, p - 1));
    MultStarter::new(pairs, p)
}

fn check_multi(
    parts: &[Vec<Pair>],
    modulus: usize,
    kappa: usize,
) -> core::result::Result<Vec<usize>, &'static str> {
    if parts.len() != kappa {
        return Err("number of parts differs from kappa");
    }
    let n = modulus / 2;
    let mut histogram = vec![0usize; n + 1];
    let mut missing = Vec::with_capacity(kappa);
    for (i, part) in parts.iter().enumerate() {
        missing.push(check_part(part, modulus, i, &mut histogram)?);
    }
    if histogram[1..n].iter().any(|&c| c != kappa) {
        return Err("some difference does not occur exactly kappa times");
    }
    Ok(missing)
}

fn check_kappa(modulus: usize, kappa: usize) -> Result<()> {
    check_modulus(modulus)?;
    if kappa == 0 || !modulus.is_multiple_of(kappa) {
        return Err(Error::BadKappa { kappa, modulus });
    }
    Ok(())
}

/// True iff `parts` is an even `kappa`-starter in `(Z_modulus, +)`.
pub fn validate_multi_starter(parts: &[Vec<Pair>], modulus: usize, kappa: usize) -> Result<bool> {
    check_kappa(modulus, kappa)?;
    Ok(check_multi(parts, modulus, kappa).is_ok())
}

/// An even `kappa`-starter `{S_0, ..., S_{kappa-1}}` in `(Z_2n, +)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiStarter {
    modulus: usize,
    kappa: usize,
    parts: Vec<Vec<Pair>>,
    missing: Vec<usize>,
}

impl MultiStarter {
    pub fn new(parts: Vec<Vec<Pair>>, modulus: usize, kappa: usize) -> Result<Self> {
        check_kappa(modulus, kappa)?;
        let parts: Vec<Vec<Pair>> = parts.into_iter().map(canonical).collect();
        let missing = check_multi(&parts, modulus, kappa).map_err(Error::InvalidStarter)?;
        Ok(MultiStarter {
            modulus,
            kappa,
            parts,
            missing,
        })
    }

    pub fn from_tuples(parts: &[&[(usize, usize)]], modulus: usize) -> Result<Self> {
        let kappa = parts.len();
        let parts = parts
            .iter()
            .map(|part| part.iter().copied().map(Pair::from).collect())
            .collect();
        Self::new(parts, modulus, kappa)
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn parts(&self) -> &[Vec<Pair>] {
        &self.parts
    }

    /// `r_i`: the element other than `i` not covered by part `i`.
    pub fn missing(&self, i: usize) -> usize {
        self.missing[i]
    }

    /// The twin multi-starter: part `i` shifted by `-kappa * floor(r_i / kappa)`
    /// becomes part `r_i mod kappa`.
    ///
    /// Fails if the residues `r_i mod kappa` are not a permutation of
    /// `0..kappa`, in which case the twin is undefined (and the starter does
    /// not induce a one-factorization either).
    pub fn twin(&self) -> Result<MultiStarter> {
        let (m, k) = (self.modulus, self.kappa);
        let mut parts: Vec<Option<Vec<Pair>>> = vec![None; k];
        for (i, part) in self.parts.iter().enumerate() {
            let r = self.missing[i];
            let back = (m - k * (r / k)) % m;
            let slot = &mut parts[r % k];
            if slot.is_some() {
                return Err(Error::InvalidStarter(
                    "missing elements collide modulo kappa",
                ));
            }
            *slot = Some(part.iter().map(|p| p.shift(back, m)).collect());
        }
        let parts = parts
            .into_iter()
            .map(|p| p.expect("every slot filled"))
            .collect();
        MultiStarter::new(parts, m, k)
    }

    /// The single part of a 1-starter as an ordinary even starter.
    pub fn as_even_starter(&self) -> Option<EvenStarter> {
        (self.kappa == 1).then(|| EvenStarter {
            modulus: self.modulus,
            pairs: self.parts[0].clone(),
            missing: self.missing[0],
        })
    }
}

impl From<EvenStarter> for MultiStarter {
    fn from(s: EvenStarter) -> Self {
        MultiStarter {
            modulus: s.modulus,
            kappa: 1,
            parts: vec![s.pairs],
            missing: vec![s.missing],
        }
    }
}

/// Twin of a multi-starter; see [`MultiStarter::twin`].
pub fn twin_multi_starter(ms: &MultiStarter) -> Result<MultiStarter> {
    ms.twin()
}

/// Even 2-starter in `(Z_{2(p-1)}, +)` built from the smallest generator.
pub fn family_quasi2(p: usize) -> Result<MultiStarter> {
    check_mult_prime(p)?;
    let field = PrimeField::new(p as u64)?;
    family_quasi2_with(&field)
}

/// Even 2-starter in `(Z_{2(p-1)}, +)` for the field's generator `g`:
///
/// * `S_0 = {{2 log x, 2 log y + 1} : x - y = 1, x != 1, y != p - 1}`
/// * `S_1 = {{2x+1, 2y+1}} u {{2x, 2y}} over {x, y} in C_0^A, plus {2r, 2r+1}`
///
/// where `C_0^A` is the log image of [`family_a`] and `r` its missing element.
pub fn family_quasi2_with(field: &PrimeField) -> Result<MultiStarter> {
    let p = field.modulus();
    check_mult_prime(p)?;
    let modulus = 2 * (p - 1);
    let s0 = (2..p)
        .map(|x| {
            let y = x - 1;
            Ok(Pair::new(2 * field.log(x)?, 2 * field.log(y)? + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    let c0a = family_a(p)?.log_image(field)?;
    let r = c0a.missing();
    let mut s1: Vec<Pair> = c0a
        .pairs()
        .iter()
        .flat_map(|q| {
            [
                Pair::new(2 * q.lo() + 1, 2 * q.hi() + 1),
                Pair::new(2 * q.lo(), 2 * q.hi()),
            ]
        })
        .collect();
    s1.push(Pair::new(2 * r, 2 * r + 1));
    MultiStarter::new(vec![s0, s1], modulus, 2)
}
