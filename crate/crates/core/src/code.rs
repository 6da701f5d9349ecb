//! C-Codes and kappa-quasi-C-Codes.
//!
//! In the graph description a column is a set of `n - 1` edges over the
//! parity vertices `Z_2n`: the information block in row `j` of column `i` is
//! edge `j` of `C_i` and feeds the parities of its two endpoints. Column `i`
//! of a kappa-quasi code is base column `i mod kappa` shifted by
//! `kappa * floor(i / kappa)`; a C-Code is the case `kappa = 1`.
//!
//! Shifted columns keep the edge order of their base column, so row `j`
//! holds the same orbit of information blocks in every column. Base columns
//! themselves are sorted canonically.

use alloc::vec;
use alloc::vec::Vec;

use crate::factorization::{
    induce_bipyramidal, induce_quasi_bipyramidal, mult_factorization_is_perfect,
};
use crate::groups::PrimeField;
use crate::starters::{
    canonical, family_a, family_b, family_quasi2, EvenStarter, MultStarter, MultiStarter, Pair,
};
use crate::{Error, Result};

/// A distance-3 lowest-density array code of length `2n` described by its
/// `kappa` base columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrayCode {
    length: usize,
    kappa: usize,
    base: Vec<Vec<Pair>>,
}

impl ArrayCode {
    /// Structural checks only; use [`ArrayCode::verify_condition1`] or the
    /// matrix oracle to decide whether the columns actually form an MDS code.
    pub fn new(length: usize, kappa: usize, base: Vec<Vec<Pair>>) -> Result<Self> {
        if length < 4 || !length.is_multiple_of(2) {
            return Err(Error::BadModulus(length));
        }
        if kappa == 0 || !length.is_multiple_of(kappa) {
            return Err(Error::BadKappa {
                kappa,
                modulus: length,
            });
        }
        if base.len() != kappa {
            return Err(Error::InvalidCode("need exactly kappa base columns"));
        }
        let n = length / 2;
        let base: Vec<Vec<Pair>> = base.into_iter().map(canonical).collect();
        for (i, column) in base.iter().enumerate() {
            if column.len() != n - 1 {
                return Err(Error::InvalidCode("base column must hold n - 1 edges"));
            }
            for p in column {
                if p.hi() >= length {
                    return Err(Error::InvalidCode("edge endpoint out of range"));
                }
                if p.lo() == p.hi() {
                    return Err(Error::InvalidCode("edge is a loop"));
                }
                if p.contains(i) {
                    return Err(Error::InvalidCode("column touches its own parity vertex"));
                }
            }
        }
        Ok(ArrayCode {
            length,
            kappa,
            base,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    /// Number of rows `n`; the last row is parity.
    pub fn rows(&self) -> usize {
        self.length / 2
    }

    pub fn base_columns(&self) -> &[Vec<Pair>] {
        &self.base
    }

    /// Column `i`: base column `i mod kappa` shifted by `kappa * floor(i / kappa)`.
    pub fn column(&self, i: usize) -> Vec<Pair> {
        let shift = self.kappa * (i / self.kappa);
        self.base[i % self.kappa]
            .iter()
            .map(|p| p.shift(shift, self.length))
            .collect()
    }

    /// All `2n` columns, edge order inherited from the base columns.
    pub fn expand_columns(&self) -> Vec<Vec<Pair>> {
        (0..self.length).map(|i| self.column(i)).collect()
    }

    /// For every `m < k`, the graph on `Z_2n` with edges `C_m ∪ C_k` must have
    /// no cycle and no path joining `m` and `k`.
    pub fn verify_condition1(&self) -> bool {
        let columns = self.expand_columns();
        let m = self.length;
        let mut dsu = DisjointSets::new(m);
        (0..m).all(|a| {
            (a + 1..m).all(|b| {
                dsu.reset();
                let acyclic = columns[a]
                    .iter()
                    .chain(&columns[b])
                    .all(|p| dsu.union(p.lo(), p.hi()));
                acyclic && dsu.find(a) != dsu.find(b)
            })
        })
    }

    /// The even starter behind a C-Code (`kappa = 1`).
    pub fn starter(&self) -> Result<EvenStarter> {
        if self.kappa != 1 {
            return Err(Error::InvalidCode(
                "quasi-cyclic code has no single starter",
            ));
        }
        EvenStarter::new(self.base[0].iter().copied(), self.length)
            .map_err(|_| Error::InvalidCode("base column is not an even starter"))
    }

    /// The even kappa-starter behind the code.
    pub fn multi_starter(&self) -> Result<MultiStarter> {
        MultiStarter::new(self.base.clone(), self.length, self.kappa)
            .map_err(|_| Error::InvalidCode("base columns are not an even multi-starter"))
    }

    /// The twin code, built from the twin (multi-)starter.
    pub fn twin(&self) -> Result<ArrayCode> {
        let twin = self
            .multi_starter()?
            .twin()
            .map_err(|_| Error::InvalidCode("twin multi-starter is undefined"))?;
        ArrayCode::new(self.length, self.kappa, twin.parts().to_vec())
    }
}

/// Union-find over parity vertices, reused across column pairs.
struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the sets of `a` and `b`; false if they were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// C-Code with `C_0 = s`, provided the induced bipyramidal factorization is
/// perfect.
pub fn build_ccode(s: &EvenStarter) -> Result<ArrayCode> {
    if !induce_bipyramidal(s).is_perfect() {
        return Err(Error::NotPerfect);
    }
    ArrayCode::new(s.modulus(), 1, vec![s.pairs().to_vec()])
}

/// kappa-quasi-C-Code from a multi-starter whose induced factorization is
/// perfect.
pub fn build_quasi_ccode(ms: &MultiStarter) -> Result<ArrayCode> {
    let f = induce_quasi_bipyramidal(ms).map_err(|_| Error::NotPerfect)?;
    if !f.is_perfect() {
        return Err(Error::NotPerfect);
    }
    ArrayCode::new(ms.modulus(), ms.kappa(), ms.parts().to_vec())
}

/// See [`ArrayCode::expand_columns`].
pub fn expand_columns(code: &ArrayCode) -> Vec<Vec<Pair>> {
    code.expand_columns()
}

/// See [`ArrayCode::twin`].
pub fn twin_code(code: &ArrayCode) -> Result<ArrayCode> {
    code.twin()
}

/// See [`ArrayCode::verify_condition1`].
pub fn verify_condition1(code: &ArrayCode) -> bool {
    code.verify_condition1()
}

/// A non-cyclic B-Code over `Z_p^*`: column labeled `a` is `a ∘ S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BCode {
    p: usize,
    /// `(label, edges)` for labels `1..p`, in label order.
    columns: Vec<(usize, Vec<Pair>)>,
}

impl BCode {
    pub fn prime(&self) -> usize {
        self.p
    }

    pub fn columns(&self) -> &[(usize, Vec<Pair>)] {
        &self.columns
    }

    pub fn column(&self, label: usize) -> Option<&[Pair]> {
        self.columns
            .iter()
            .find(|(a, _)| *a == label)
            .map(|(_, c)| c.as_slice())
    }
}

/// Columns `a ∘ S = {{a x, a y}}` for every `a` in `Z_p^*`, provided the
/// multiplicatively induced factorization is perfect.
pub fn bcode_from_mult_starter(ms: &MultStarter) -> Result<BCode> {
    if !mult_factorization_is_perfect(ms) {
        return Err(Error::NotPerfect);
    }
    let p = ms.prime();
    let columns = (1..p)
        .map(|a| {
            let col = ms
                .pairs()
                .iter()
                .map(|q| Pair::new(a * q.lo() % p, a * q.hi() % p))
                .collect();
            (a, col)
        })
        .collect();
    Ok(BCode { p, columns })
}

/// Relabels every element and column label `g^i` as `i`, turning the B-Code
/// into a C-Code with `C_0 = {{log x, log y} : {x, y} in S}`.
///
/// The relabeled columns are checked to be cyclic shifts of `C_0`; a
/// different generator gives a different but equally valid code.
pub fn ccode_from_bcode(bcode: &BCode, field: &PrimeField) -> Result<ArrayCode> {
    if field.modulus() != bcode.p || bcode.columns.len() != bcode.p - 1 {
        return Err(Error::NotCyclicGroup);
    }
    let order = field.order();
    let relabel = |col: &[Pair]| -> Result<Vec<Pair>> {
        let mapped = col
            .iter()
            .map(|q| Ok(Pair::new(field.log(q.lo())?, field.log(q.hi())?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(canonical(mapped))
    };
    let c0 = relabel(bcode.column(1).ok_or(Error::NotCyclicGroup)?)?;
    for i in 0..order {
        let col = bcode.column(field.exp(i)).ok_or(Error::NotCyclicGroup)?;
        let shifted = canonical(c0.iter().map(|p| p.shift(i, order)));
        if relabel(col)? != shifted {
            return Err(Error::NotCyclicGroup);
        }
    }
    let code = ArrayCode::new(order, 1, vec![c0])?;
    if !code.verify_condition1() {
        return Err(Error::InvalidCode(
            "transformed columns violate the MDS condition",
        ));
    }
    Ok(code)
}

/// The four C-Code families of length `p - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    ATwin,
    B,
    BTwin,
}

/// `C_0^A`, `C_0^B` or one of their twins at prime `p`, using the smallest
/// generator of `Z_p^*`.
pub fn family_code(p: usize, family: Family) -> Result<ArrayCode> {
    let field = PrimeField::new(p as u64)?;
    let starter = match family {
        Family::A | Family::ATwin => family_a(p)?,
        Family::B | Family::BTwin => family_b(p)?,
    };
    let code = ccode_from_bcode(&bcode_from_mult_starter(&starter)?, &field)?;
    match family {
        Family::A | Family::B => Ok(code),
        Family::ATwin | Family::BTwin => code.twin(),
    }
}

/// The 2-quasi-C-Code of length `2(p - 1)` from [`family_quasi2`], or its twin.
pub fn quasi2_code(p: usize, twin: bool) -> Result<ArrayCode> {
    let mut ms = family_quasi2(p)?;
    if twin {
        ms = ms.twin()?;
    }
    build_quasi_ccode(&ms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::is_prime;

    fn pairs(t: &[(usize, usize)]) -> Vec<Pair> {
        t.iter().copied().map(Pair::from).collect()
    }

    fn set(t: &[(usize, usize)]) -> Vec<Pair> {
        canonical(pairs(t))
    }

    fn c4() -> ArrayCode {
        build_ccode(&EvenStarter::from_tuples(&[(1, 2)], 4).unwrap()).unwrap()
    }

    #[test]
    fn expands_c4_columns() {
        let c = c4();
        assert_eq!(canonical(c.column(2)), set(&[(3, 0)]));
        assert_eq!(c.column(0), set(&[(1, 2)]));
        assert_eq!(canonical(c.column(1)), set(&[(2, 3)]));
        assert_eq!(canonical(c.column(3)), set(&[(0, 1)]));
    }

    #[test]
    fn c6_columns_match_table() {
        let s = EvenStarter::from_tuples(&[(1, 2), (3, 5)], 6).unwrap();
        let c = build_ccode(&s).unwrap();
        let rows0 = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 1)];
        let rows1 = [(3, 5), (4, 0), (5, 1), (0, 2), (1, 3), (2, 4)];
        for i in 0..6 {
            assert_eq!(c.column(i), pairs(&[rows0[i], rows1[i]]), "column {i}");
        }
        assert!(c.verify_condition1());

        let t = c.twin().unwrap();
        assert_eq!(t.base_columns()[0], set(&[(3, 4), (5, 1)]));
        assert_eq!(t.twin().unwrap().expand_columns(), c.expand_columns());
    }

    #[test]
    fn length8_starters_build_no_code() {
        let s = EvenStarter::from_tuples(&[(1, 2), (3, 5), (4, 7)], 8).unwrap();
        assert_eq!(build_ccode(&s), Err(Error::NotPerfect));
    }

    #[test]
    fn condition1_examples() {
        assert!(c4().verify_condition1());
        let broken = ArrayCode::new(6, 1, vec![pairs(&[(1, 2), (3, 4)])]).unwrap();
        assert!(!broken.verify_condition1());
    }

    /// Exhaustive scan for a violating column pair using explicit graph
    /// search, independent of the union-find implementation.
    fn violating_pair(code: &ArrayCode) -> Option<(usize, usize)> {
        let m = code.length();
        let cols = code.expand_columns();
        for a in 0..m {
            for b in a + 1..m {
                let edges: Vec<Pair> = cols[a].iter().chain(&cols[b]).copied().collect();
                // components by repeated relaxation
                let mut comp: Vec<usize> = (0..m).collect();
                loop {
                    let mut changed = false;
                    for e in &edges {
                        let c = comp[e.lo()].min(comp[e.hi()]);
                        for v in [e.lo(), e.hi()] {
                            if comp[v] != c {
                                comp[v] = c;
                                changed = true;
                            }
                        }
                    }
                    if !changed {
                        break;
                    }
                }
                let mut roots: Vec<usize> = comp.clone();
                roots.sort_unstable();
                roots.dedup();
                // a forest on m vertices with e edges has m - e components
                let cyclic = roots.len() != m - edges.len();
                if cyclic || comp[a] == comp[b] {
                    return Some((a, b));
                }
            }
        }
        None
    }

    #[test]
    fn condition1_agrees_with_component_scan() {
        let broken = ArrayCode::new(6, 1, vec![pairs(&[(1, 2), (3, 4)])]).unwrap();
        assert!(violating_pair(&broken).is_some());
        assert!(violating_pair(&c4()).is_none());
        for t in [
            &[(1, 2), (3, 5)][..],
            &[(1, 2), (3, 4)],
            &[(2, 4), (3, 5)],
            &[(1, 3), (2, 5)],
        ] {
            let code = ArrayCode::new(6, 1, vec![pairs(t)]).unwrap();
            assert_eq!(
                code.verify_condition1(),
                violating_pair(&code).is_none(),
                "{t:?}"
            );
        }
    }

    #[test]
    fn quasi_example_columns() {
        let ms =
            MultiStarter::from_tuples(&[&[(1, 2), (3, 5), (4, 6)], &[(0, 3), (2, 7), (4, 5)]], 8)
                .unwrap();
        let code = build_quasi_ccode(&ms).unwrap();
        assert_eq!(code.column(2), pairs(&[(3, 4), (5, 7), (6, 0)]));
        assert!(code.verify_condition1());
        // each column group is closed under shifting by kappa
        for i in 0..8 {
            let next: Vec<Pair> = code.column(i).iter().map(|p| p.shift(2, 8)).collect();
            assert_eq!(code.column((i + 2) % 8), next);
        }
    }

    #[test]
    fn bcode_example_p7() {
        let b = bcode_from_mult_starter(&family_a(7).unwrap()).unwrap();
        assert_eq!(b.column(1).unwrap(), &set(&[(2, 6), (3, 5)])[..]);
        let expected = [
            (1, [(2, 6), (3, 5)]),
            (2, [(4, 5), (6, 3)]),
            (3, [(6, 4), (2, 1)]),
            (4, [(1, 3), (5, 6)]),
            (5, [(3, 2), (1, 4)]),
            (6, [(5, 1), (4, 2)]),
        ];
        for (a, col) in expected {
            assert_eq!(
                canonical(b.column(a).unwrap().to_vec()),
                set(&col),
                "column {a}"
            );
            assert!(b.column(a).unwrap().iter().all(|p| !p.contains(a)));
        }
    }

    #[test]
    fn bcode_columns_avoid_own_label() {
        for p in (5..=31).filter(|&p| is_prime(p as u64)) {
            for s in [family_a(p).unwrap(), family_b(p).unwrap()] {
                let b = bcode_from_mult_starter(&s).unwrap();
                for (a, col) in b.columns() {
                    assert!(col.iter().all(|q| !q.contains(*a)), "p = {p}, a = {a}");
                }
            }
        }
    }

    #[test]
    fn family_codes_at_7() {
        let field = PrimeField::new(7).unwrap();
        let a = ccode_from_bcode(
            &bcode_from_mult_starter(&family_a(7).unwrap()).unwrap(),
            &field,
        )
        .unwrap();
        assert_eq!(a.base_columns()[0], set(&[(2, 3), (1, 5)]));
        let b = ccode_from_bcode(
            &bcode_from_mult_starter(&family_b(7).unwrap()).unwrap(),
            &field,
        )
        .unwrap();
        assert_eq!(b.base_columns()[0], set(&[(1, 5), (4, 3)]));
        assert_eq!(
            family_code(7, Family::ATwin).unwrap().base_columns()[0],
            set(&[(4, 5), (3, 1)])
        );
        assert_eq!(
            family_code(7, Family::BTwin).unwrap().base_columns()[0],
            set(&[(5, 3), (2, 1)])
        );
    }

    #[test]
    fn relabeled_table_at_7() {
        let c = family_code(7, Family::A).unwrap();
        let rows0 = [(2, 3), (3, 4), (4, 5), (5, 0), (0, 1), (1, 2)];
        let rows1 = [(1, 5), (2, 0), (3, 1), (4, 2), (5, 3), (0, 4)];
        for i in 0..6 {
            assert_eq!(
                canonical(c.column(i)),
                set(&[rows0[i], rows1[i]]),
                "column {i}"
            );
        }
    }

    #[test]
    fn wrong_field_is_rejected() {
        let b = bcode_from_mult_starter(&family_a(7).unwrap()).unwrap();
        let f11 = PrimeField::new(11).unwrap();
        assert_eq!(ccode_from_bcode(&b, &f11), Err(Error::NotCyclicGroup));
    }

    #[test]
    fn other_generator_gives_another_valid_code() {
        let b = bcode_from_mult_starter(&family_a(7).unwrap()).unwrap();
        let f = PrimeField::with_generator(7, 5).unwrap();
        let c = ccode_from_bcode(&b, &f).unwrap();
        assert!(c.verify_condition1());
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            ArrayCode::new(6, 1, vec![pairs(&[(0, 2), (3, 5)])]),
            Err(Error::InvalidCode(_))
        ));
        assert!(matches!(
            ArrayCode::new(6, 1, vec![pairs(&[(1, 2)])]),
            Err(Error::InvalidCode(_))
        ));
        assert!(matches!(
            ArrayCode::new(6, 4, vec![]),
            Err(Error::BadKappa { .. })
        ));
        assert!(matches!(
            ArrayCode::new(7, 1, vec![]),
            Err(Error::BadModulus(7))
        ));
    }
}
