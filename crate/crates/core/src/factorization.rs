//! One-factorizations of the `2n`-regular graph on `Z_2n ∪ {∞1, ∞2}` in which
//! `∞1 ∞2` and every `{v, v + n}` are non-edges.
//!
//! Factors are stored as mate arrays over `2n + 2` slots: slot `v < 2n` is the
//! finite vertex `v`, slot `2n` is `∞1` and slot `2n + 1` is `∞2`. The union of
//! two perfect matchings is a disjoint union of even cycles, so perfection of
//! a pair reduces to walking the cycle through `∞1` and comparing its length
//! with `2n + 2`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::code::ArrayCode;
use crate::starters::{EvenStarter, MultStarter, MultiStarter, Pair};
use crate::{Error, Result};

/// A vertex of the factorized graph. Shifts act on finite labels only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Finite(usize),
    Inf1,
    Inf2,
}

impl Vertex {
    fn slot(self, modulus: usize) -> usize {
        match self {
            Vertex::Finite(v) => v,
            Vertex::Inf1 => modulus,
            Vertex::Inf2 => modulus + 1,
        }
    }

    fn from_slot(slot: usize, modulus: usize) -> Vertex {
        match slot.checked_sub(modulus) {
            None => Vertex::Finite(slot),
            Some(0) => Vertex::Inf1,
            Some(_) => Vertex::Inf2,
        }
    }

    /// `self + k`; the two apexes are fixed.
    pub fn shift(self, k: usize, modulus: usize) -> Vertex {
        match self {
            Vertex::Finite(v) => Vertex::Finite((v + k) % modulus),
            inf => inf,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Finite(v) => write!(f, "{v}"),
            Vertex::Inf1 => f.write_str("∞1"),
            Vertex::Inf2 => f.write_str("∞2"),
        }
    }
}

/// A perfect matching on the `2n + 2` vertices avoiding the forbidden edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneFactor {
    modulus: usize,
    mate: Vec<usize>,
}

impl OneFactor {
    pub fn from_edges(modulus: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let slots = modulus + 2;
        let mut mate = vec![usize::MAX; slots];
        for &(a, b) in edges {
            if let Vertex::Finite(v) = a {
                if v >= modulus {
                    return Err(Error::MalformedFactorization("finite vertex out of range"));
                }
            }
            if let Vertex::Finite(v) = b {
                if v >= modulus {
                    return Err(Error::MalformedFactorization("finite vertex out of range"));
                }
            }
            let (x, y) = (a.slot(modulus), b.slot(modulus));
            if x == y || mate[x] != usize::MAX || mate[y] != usize::MAX {
                return Err(Error::MalformedFactorization(
                    "edges do not form a matching",
                ));
            }
            mate[x] = y;
            mate[y] = x;
        }
        if mate.contains(&usize::MAX) {
            return Err(Error::MalformedFactorization("matching is not perfect"));
        }
        let factor = OneFactor { modulus, mate };
        if factor.has_forbidden_edge() {
            return Err(Error::MalformedFactorization(
                "factor contains a forbidden edge",
            ));
        }
        Ok(factor)
    }

    /// `starter ∪ {{anchor, ∞1}, {missing, ∞2}}`.
    fn completed(modulus: usize, pairs: &[Pair], anchor: usize, missing: usize) -> Result<Self> {
        let mut edges: Vec<(Vertex, Vertex)> = pairs
            .iter()
            .map(|p| (Vertex::Finite(p.lo()), Vertex::Finite(p.hi())))
            .collect();
        edges.push((Vertex::Finite(anchor), Vertex::Inf1));
        edges.push((Vertex::Finite(missing), Vertex::Inf2));
        OneFactor::from_edges(modulus, &edges)
    }

    fn has_forbidden_edge(&self) -> bool {
        let m = self.modulus;
        let n = m / 2;
        self.mate[m] == m + 1 || (0..m).any(|v| self.mate[v] == (v + n) % m)
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn partner(&self, v: Vertex) -> Vertex {
        Vertex::from_slot(self.mate[v.slot(self.modulus)], self.modulus)
    }

    pub fn contains_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.partner(a) == b
    }

    /// All `n + 1` edges, each with its smaller endpoint first, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let m = self.modulus;
        (0..m + 2)
            .filter(|&x| x < self.mate[x])
            .map(|x| (Vertex::from_slot(x, m), Vertex::from_slot(self.mate[x], m)))
            .collect()
    }

    /// The edges between finite vertices, in canonical order.
    pub fn finite_edges(&self) -> Vec<Pair> {
        let m = self.modulus;
        (0..m)
            .filter(|&x| x < self.mate[x] && self.mate[x] < m)
            .map(|x| Pair::new(x, self.mate[x]))
            .collect()
    }

    pub fn shift(&self, k: usize) -> OneFactor {
        let m = self.modulus;
        let mut mate = vec![0; m + 2];
        for x in 0..m + 2 {
            let sx = if x < m { (x + k) % m } else { x };
            let y = self.mate[x];
            mate[sx] = if y < m { (y + k) % m } else { y };
        }
        OneFactor { modulus: m, mate }
    }

    /// The same matching with the labels `∞1` and `∞2` exchanged.
    pub fn swap_apexes(&self) -> OneFactor {
        let m = self.modulus;
        let relabel = |x: usize| {
            if x == m {
                m + 1
            } else if x == m + 1 {
                m
            } else {
                x
            }
        };
        let mut mate = vec![0; m + 2];
        for x in 0..m + 2 {
            mate[relabel(x)] = relabel(self.mate[x]);
        }
        OneFactor { modulus: m, mate }
    }
}

/// Length of the alternating cycle through `start` in the union of two
/// perfect matchings given as mate arrays.
fn alternating_cycle_len(a: &[usize], b: &[usize], start: usize) -> usize {
    let mut v = a[start];
    let mut len = 1;
    let mut use_b = true;
    while v != start {
        v = if use_b { b[v] } else { a[v] };
        use_b = !use_b;
        len += 1;
    }
    len
}

fn is_hamiltonian_union(a: &[usize], b: &[usize], start: usize) -> bool {
    alternating_cycle_len(a, b, start) == a.len()
}

/// Which unordered factor pairs the perfection test examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerfectionCheck {
    /// One representative per orbit of the shift symmetry.
    Reduced,
    /// All `C(2n, 2)` pairs.
    Full,
}

/// A (quasi-)bipyramidal one-factorization. Factor `F_i` is the one holding
/// the edge `{i, ∞1}`, and `F_{i + kappa} = F_i + kappa`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneFactorization {
    modulus: usize,
    kappa: usize,
    factors: Vec<OneFactor>,
}

impl OneFactorization {
    /// Validates and re-indexes an arbitrary list of factors.
    pub fn from_factors(modulus: usize, kappa: usize, factors: Vec<OneFactor>) -> Result<Self> {
        if modulus < 4 || !modulus.is_multiple_of(2) {
            return Err(Error::BadModulus(modulus));
        }
        if kappa == 0 || !modulus.is_multiple_of(kappa) {
            return Err(Error::BadKappa { kappa, modulus });
        }
        if factors.len() != modulus {
            return Err(Error::MalformedFactorization("need exactly 2n factors"));
        }
        let mut ordered: Vec<Option<OneFactor>> = vec![None; modulus];
        for f in factors {
            if f.modulus != modulus {
                return Err(Error::MalformedFactorization(
                    "factor over a different modulus",
                ));
            }
            if f.has_forbidden_edge() {
                return Err(Error::MalformedFactorization(
                    "factor contains a forbidden edge",
                ));
            }
            let i = f.mate[modulus];
            if i >= modulus {
                return Err(Error::MalformedFactorization("∞1 matched to ∞2"));
            }
            if ordered[i].replace(f).is_some() {
                return Err(Error::MalformedFactorization(
                    "two factors share the edge {i, ∞1}",
                ));
            }
        }
        let factors: Vec<OneFactor> = ordered
            .into_iter()
            .map(|f| f.expect("all 2n slots filled"))
            .collect();

        // every edge of the 2n-regular graph in exactly one factor
        let slots = modulus + 2;
        let mut used = vec![false; slots * slots];
        for f in &factors {
            for x in 0..slots {
                let y = f.mate[x];
                if x < y {
                    if used[x * slots + y] {
                        return Err(Error::MalformedFactorization("edge appears in two factors"));
                    }
                    used[x * slots + y] = true;
                }
            }
        }

        for i in 0..modulus {
            let j = (i + kappa) % modulus;
            if factors[i].shift(kappa) != factors[j] {
                return Err(Error::MalformedFactorization(
                    "factors lack the kappa-shift symmetry",
                ));
            }
        }
        Ok(OneFactorization {
            modulus,
            kappa,
            factors,
        })
    }

    /// The factorization with `∞1` and `∞2` exchanged, re-indexed by the new
    /// `∞1` mates. For a bipyramidal factorization this is the one induced by
    /// the twin starter.
    pub fn swap_apexes(&self) -> Result<OneFactorization> {
        let factors = self.factors.iter().map(OneFactor::swap_apexes).collect();
        OneFactorization::from_factors(self.modulus, self.kappa, factors)
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn factors(&self) -> &[OneFactor] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &OneFactor {
        &self.factors[i]
    }

    /// True iff `F_i ∪ F_j` is a Hamiltonian cycle.
    pub fn union_is_hamiltonian(&self, i: usize, j: usize) -> bool {
        is_hamiltonian_union(&self.factors[i].mate, &self.factors[j].mate, self.modulus)
    }

    /// Perfection test using the shift symmetry.
    ///
    /// Shifting by `kappa` permutes factors, so every pair `(a, b)` is a shift
    /// of one with `a < kappa`. For `kappa = 1` this further folds to
    /// `F_0 ∪ F_i` for `i in 1..=n`, since `(0, i)` and `(0, 2n - i)` are
    /// shifts of each other.
    pub fn is_perfect(&self) -> bool {
        self.is_perfect_with(PerfectionCheck::Reduced)
    }

    pub fn is_perfect_with(&self, mode: PerfectionCheck) -> bool {
        let m = self.modulus;
        match mode {
            PerfectionCheck::Full => {
                (0..m).all(|i| (i + 1..m).all(|j| self.union_is_hamiltonian(i, j)))
            }
            PerfectionCheck::Reduced if self.kappa == 1 => {
                (1..=m / 2).all(|i| self.union_is_hamiltonian(0, i))
            }
            PerfectionCheck::Reduced => {
                (0..self.kappa).all(|i| (i + 1..m).all(|j| self.union_is_hamiltonian(i, j)))
            }
        }
    }

    /// `F_0` minus its two apex edges. Only defined for bipyramidal (`kappa = 1`)
    /// factorizations, where the result is always an even starter.
    pub fn extract_starter(&self) -> Result<EvenStarter> {
        if self.kappa != 1 {
            return Err(Error::NotBipyramidal);
        }
        EvenStarter::new(self.factors[0].finite_edges(), self.modulus)
    }

    /// The multi-starter `{F_i minus apex edges : i < kappa}`.
    pub fn extract_multi_starter(&self) -> Result<MultiStarter> {
        let parts = self.factors[..self.kappa]
            .iter()
            .map(OneFactor::finite_edges)
            .collect();
        MultiStarter::new(parts, self.modulus, self.kappa)
    }
}

/// The bipyramidal one-factorization `F_i = F_0 + i` with
/// `F_0 = S ∪ {{0, ∞1}, {r, ∞2}}`.
pub fn induce_bipyramidal(s: &EvenStarter) -> OneFactorization {
    let m = s.modulus();
    let base = OneFactor::completed(m, s.pairs(), 0, s.missing())
        .expect("an even starter completes to a perfect matching");
    let factors = (0..m).map(|i| base.shift(i)).collect();
    OneFactorization {
        modulus: m,
        kappa: 1,
        factors,
    }
}

/// The kappa-quasi-bipyramidal one-factorization whose factor `kappa*t + i`
/// is `S̃_i + kappa*t` with `S̃_i = S_i ∪ {{i, ∞1}, {r_i, ∞2}}`.
///
/// Fails when the shifted parts overlap, which the difference-count
/// definition alone does not rule out.
pub fn induce_quasi_bipyramidal(ms: &MultiStarter) -> Result<OneFactorization> {
    let (m, k) = (ms.modulus(), ms.kappa());
    let mut factors = Vec::with_capacity(m);
    for i in 0..k {
        let base = OneFactor::completed(m, &ms.parts()[i], i, ms.missing(i))
            .map_err(|_| Error::InvalidStarter("part does not complete to a perfect matching"))?;
        for t in 0..m / k {
            factors.push(base.shift(k * t));
        }
    }
    OneFactorization::from_factors(m, k, factors)
}

/// Whether the factorization is perfect; see [`OneFactorization::is_perfect`].
pub fn is_perfect(f: &OneFactorization) -> bool {
    f.is_perfect()
}

/// Removes the apex edges from every factor of a perfect factorization.
pub fn code_from_p1f(f: &OneFactorization) -> Result<ArrayCode> {
    if !f.is_perfect() {
        return Err(Error::NotPerfect);
    }
    let base = f.factors[..f.kappa]
        .iter()
        .map(OneFactor::finite_edges)
        .collect();
    ArrayCode::new(f.modulus, f.kappa, base)
}

/// Completes every column `C_i` to `C_i ∪ {{i, ∞1}, {r_i, ∞2}}` and checks that
/// the result is a perfect one-factorization.
pub fn p1f_from_code(code: &ArrayCode) -> Result<OneFactorization> {
    let m = code.length();
    let mut factors = Vec::with_capacity(m);
    for i in 0..m {
        let column = code.column(i);
        let mut covered = vec![false; m];
        for p in &column {
            for v in [p.lo(), p.hi()] {
                if covered[v] {
                    return Err(Error::NotACode("column edges share a vertex"));
                }
                covered[v] = true;
            }
        }
        if covered[i] {
            return Err(Error::NotACode("column touches its own parity vertex"));
        }
        let r = (0..m)
            .find(|&v| v != i && !covered[v])
            .ok_or(Error::NotACode("column covers every vertex"))?;
        let factor = OneFactor::completed(m, &column, i, r)
            .map_err(|_| Error::NotACode("column does not complete to a one-factor"))?;
        factors.push(factor);
    }
    let f = OneFactorization::from_factors(m, code.kappa(), factors)
        .map_err(|_| Error::NotACode("completed columns are not a one-factorization"))?;
    if !f.is_perfect() {
        return Err(Error::NotACode("completed factorization is not perfect"));
    }
    Ok(f)
}

/// Perfection of the bipyramidal one-factorization `{a ∘ S̃ : a in Z_p^*}`
/// induced by a multiplicative starter, with `S̃ = S ∪ {{1, ∞1}, {r, ∞2}}`.
///
/// Vertices are relabeled `x -> x - 1` so the mate arrays match the additive
/// layout. Left multiplication permutes factors, so comparing `F_1` with
/// every other factor suffices.
pub fn mult_factorization_is_perfect(s: &MultStarter) -> bool {
    let p = s.prime();
    let order = p - 1;
    let inf1 = order;
    let inf2 = order + 1;
    let factor = |a: usize| -> Vec<usize> {
        let mut mate = vec![0usize; order + 2];
        let mut join = |x: usize, y: usize| {
            mate[x] = y;
            mate[y] = x;
        };
        for q in s.pairs() {
            join(a * q.lo() % p - 1, a * q.hi() % p - 1);
        }
        join(a - 1, inf1);
        join(a * s.missing() % p - 1, inf2);
        mate
    };
    let f1 = factor(1);
    (2..p).all(|a| is_hamiltonian_union(&f1, &factor(a), inf1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starters::family_quasi2;
    use Vertex::*;

    fn c4_starter() -> EvenStarter {
        EvenStarter::from_tuples(&[(1, 2)], 4).unwrap()
    }

    #[test]
    fn c4_factorization_matches_expanded_columns() {
        let f = induce_bipyramidal(&c4_starter());
        let expect = [
            [(Finite(1), Finite(2)), (Finite(0), Inf1), (Finite(3), Inf2)],
            [(Finite(2), Finite(3)), (Finite(1), Inf1), (Finite(0), Inf2)],
            [(Finite(0), Finite(3)), (Finite(2), Inf1), (Finite(1), Inf2)],
            [(Finite(0), Finite(1)), (Finite(3), Inf1), (Finite(2), Inf2)],
        ];
        for (i, edges) in expect.iter().enumerate() {
            let factor = OneFactor::from_edges(4, edges).unwrap();
            assert_eq!(f.factor(i), &factor, "factor {i}");
        }
        assert!(f.is_perfect());
    }

    #[test]
    fn factor_i_holds_i_inf1() {
        let s = EvenStarter::from_tuples(&[(1, 2), (3, 5), (4, 8), (6, 9)], 10).unwrap();
        let f = induce_bipyramidal(&s);
        for i in 0..10 {
            assert!(f.factor(i).contains_edge(Finite(i), Inf1));
            assert_eq!(f.factor(i).edges().len(), 6);
        }
    }

    #[test]
    fn c6_example_is_perfect() {
        let s = EvenStarter::from_tuples(&[(1, 2), (3, 5)], 6).unwrap();
        let f = induce_bipyramidal(&s);
        assert!(f.is_perfect());
        assert!(f.is_perfect_with(PerfectionCheck::Full));
    }

    #[test]
    fn rejects_non_matchings() {
        assert!(
            OneFactor::from_edges(4, &[(Finite(1), Finite(2)), (Finite(2), Finite(3))]).is_err()
        );
        // not perfect: vertex 3 and ∞2 uncovered
        assert!(OneFactor::from_edges(4, &[(Finite(1), Finite(2)), (Finite(0), Inf1)]).is_err());
        // {1, 3} has difference n = 2
        let e = [(Finite(1), Finite(3)), (Finite(0), Inf1), (Finite(2), Inf2)];
        assert!(OneFactor::from_edges(4, &e).is_err());
        let e = [(Finite(1), Finite(2)), (Finite(0), Finite(3)), (Inf1, Inf2)];
        assert!(OneFactor::from_edges(4, &e).is_err());
    }

    #[test]
    fn from_factors_reindexes_and_validates() {
        let f = induce_bipyramidal(&c4_starter());
        let mut shuffled: Vec<OneFactor> = f.factors().to_vec();
        shuffled.reverse();
        let g = OneFactorization::from_factors(4, 1, shuffled).unwrap();
        assert_eq!(f, g);

        let mut dup = f.factors().to_vec();
        dup[1] = dup[0].clone();
        assert!(OneFactorization::from_factors(4, 1, dup).is_err());
    }

    #[test]
    fn extract_round_trip() {
        let s = c4_starter();
        assert_eq!(induce_bipyramidal(&s).extract_starter().unwrap(), s);
        let s12 = EvenStarter::from_tuples(&[(1, 10), (2, 6), (3, 5), (4, 9), (7, 8)], 12).unwrap();
        assert_eq!(induce_bipyramidal(&s12).extract_starter().unwrap(), s12);
    }

    #[test]
    fn twins_induce_the_same_finite_factors() {
        // the twin factorization is the original with the two apexes swapped
        let s = EvenStarter::from_tuples(&[(1, 2), (3, 5)], 6).unwrap();
        let a = induce_bipyramidal(&s);
        let b = induce_bipyramidal(&s.twin());
        let mut fa: Vec<_> = a.factors().iter().map(OneFactor::finite_edges).collect();
        let mut fb: Vec<_> = b.factors().iter().map(OneFactor::finite_edges).collect();
        fa.sort();
        fb.sort();
        assert_eq!(fa, fb);
        assert_eq!(a.swap_apexes().unwrap(), b);
        assert_eq!(b.swap_apexes().unwrap(), a);
    }

    fn quasi8_example() -> MultiStarter {
        MultiStarter::from_tuples(&[&[(1, 2), (3, 5), (4, 6)], &[(0, 3), (2, 7), (4, 5)]], 8)
            .unwrap()
    }

    #[test]
    fn quasi_example_factorization() {
        let f = induce_quasi_bipyramidal(&quasi8_example()).unwrap();
        assert_eq!(f.factors().len(), 8);
        let f1 = f.factor(1);
        for (x, y) in [(0, 3), (2, 7), (4, 5)] {
            assert!(f1.contains_edge(Finite(x), Finite(y)));
        }
        assert!(f.is_perfect());
        assert!(f.is_perfect_with(PerfectionCheck::Full));
        let ms = f.extract_multi_starter().unwrap();
        assert_eq!(ms, quasi8_example());
        assert_eq!(f.extract_starter(), Err(Error::NotBipyramidal));
    }

    #[test]
    fn kappa_one_quasi_matches_bipyramidal() {
        let s = EvenStarter::from_tuples(&[(1, 2), (3, 5)], 6).unwrap();
        let q = induce_quasi_bipyramidal(&MultiStarter::from(s.clone())).unwrap();
        assert_eq!(q, induce_bipyramidal(&s));
    }

    #[test]
    fn quasi2_family_factorizations_are_matchings() {
        for p in [5, 7, 11, 13] {
            let f = induce_quasi_bipyramidal(&family_quasi2(p).unwrap()).unwrap();
            for factor in f.factors() {
                assert_eq!(factor.edges().len(), f.modulus() / 2 + 1);
            }
            assert!(f.is_perfect(), "p = {p}");
        }
    }

    #[test]
    fn code_p1f_round_trip_c4() {
        let f = induce_bipyramidal(&c4_starter());
        let code = code_from_p1f(&f).unwrap();
        assert_eq!(code.base_columns(), &[vec![Pair::new(1, 2)]]);
        assert_eq!(p1f_from_code(&code).unwrap(), f);
    }

    #[test]
    fn code_from_imperfect_factorization_fails() {
        // every even starter of Z_8 fails; take the first one
        let s = EvenStarter::from_tuples(&[(1, 2), (3, 5), (4, 7)], 8).unwrap();
        let f = induce_bipyramidal(&s);
        assert!(!f.is_perfect());
        assert_eq!(code_from_p1f(&f), Err(Error::NotPerfect));
    }

    #[test]
    fn multiplicative_perfection() {
        let a = crate::starters::family_a(7).unwrap();
        assert!(mult_factorization_is_perfect(&a));
    }
}
