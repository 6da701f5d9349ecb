//! Exhaustive even-starter enumeration and code counting.
//!
//! Starters are generated by backtracking on the smallest undecided element
//! `v` of `1..2n`: either pair `v` with a larger free `w` whose difference
//! class is still open, or declare `v` the missing element. Pairings are
//! tried in increasing `w` and the skip last, so starters come out in
//! lexicographic order of their sorted pair lists. The first decision, on
//! element `1`, splits the space into independent [`Partition`]s whose
//! concatenation is that same order.

use alloc::vec;
use alloc::vec::Vec;

use crate::code::{build_ccode, ArrayCode};
use crate::starters::{EvenStarter, Pair};
use crate::{Error, Result};

/// Largest length the enumerator accepts.
pub const MAX_SEARCH_LENGTH: usize = 36;

/// Checks `4 <= length <= MAX_SEARCH_LENGTH` and `length` even.
pub fn check_search_length(length: usize) -> Result<()> {
    if length < 4 || !length.is_multiple_of(2) || length > MAX_SEARCH_LENGTH {
        return Err(Error::BadLength(length));
    }
    Ok(())
}

/// The first decision on element `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Partition {
    /// `{1, w}` is a pair.
    Pair(usize),
    /// `1` is the missing element.
    Missing,
}

/// All partitions at `length`, in enumeration order.
pub fn partitions(length: usize) -> Result<Vec<Partition>> {
    check_search_length(length)?;
    let n = length / 2;
    let mut out: Vec<Partition> = (2..length)
        .filter(|&w| w != n + 1)
        .map(Partition::Pair)
        .collect();
    out.push(Partition::Missing);
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    v: usize,
    /// Next `w` to try; `length` means the skip, above it means exhausted.
    next: usize,
    applied: Option<usize>,
}

/// Lexicographic stream of every even starter at one length.
#[derive(Debug, Clone)]
pub struct EvenStarters {
    length: usize,
    used: u64,
    classes: u64,
    skipped: bool,
    pairs: Vec<Pair>,
    stack: Vec<Frame>,
    root: Option<Partition>,
}

/// Every even starter in `(Z_length, +)`, in lexicographic canonical order.
pub fn enumerate_even_starters(length: usize) -> Result<EvenStarters> {
    check_search_length(length)?;
    Ok(EvenStarters::new(length, None))
}

/// The even starters whose first decision is `part`.
pub fn enumerate_partition(length: usize, part: Partition) -> Result<EvenStarters> {
    check_search_length(length)?;
    if let Partition::Pair(w) = part {
        if w < 2 || w >= length || w == length / 2 + 1 {
            return Err(Error::OutOfRange {
                value: w,
                modulus: length,
            });
        }
    }
    Ok(EvenStarters::new(length, Some(part)))
}

impl EvenStarters {
    fn new(length: usize, root: Option<Partition>) -> Self {
        let mut it = EvenStarters {
            length,
            used: 1,
            classes: 0,
            skipped: false,
            pairs: Vec::with_capacity(length / 2),
            stack: Vec::with_capacity(length),
            root,
        };
        let next = match root {
            Some(Partition::Pair(w)) => w,
            Some(Partition::Missing) => length,
            None => 2,
        };
        it.stack.push(Frame {
            v: 1,
            next,
            applied: None,
        });
        it
    }

    fn class(&self, v: usize, w: usize) -> usize {
        let d = w - v;
        d.min(self.length - d)
    }

    fn undo(&mut self, frame: Frame) {
        match frame.applied {
            None => {}
            Some(w) if w == self.length => self.skipped = false,
            Some(w) => {
                self.pairs.pop();
                self.used &= !(1 << w);
                self.classes &= !(1 << self.class(frame.v, w));
            }
        }
        self.used &= !(1 << frame.v);
    }

    /// Applies the next admissible choice for the top frame.
    fn advance(&mut self) -> bool {
        let len = self.length;
        let n = len / 2;
        let top = self.stack.len() - 1;
        let mut f = self.stack[top];
        let mut chosen = None;
        while f.next <= len {
            let w = f.next;
            f.next += 1;
            if w == len {
                if !self.skipped {
                    chosen = Some(w);
                    break;
                }
                continue;
            }
            if self.used & (1 << w) != 0 {
                continue;
            }
            let c = self.class(f.v, w);
            if c == n || self.classes & (1 << c) != 0 {
                continue;
            }
            chosen = Some(w);
            break;
        }
        if top == 0 && self.root.is_some() {
            // a partition fixes the first decision
            f.next = len + 1;
        }
        f.applied = chosen;
        self.stack[top] = f;
        let Some(w) = chosen else {
            return false;
        };
        self.used |= 1 << f.v;
        if w == len {
            self.skipped = true;
        } else {
            self.used |= 1 << w;
            self.classes |= 1 << self.class(f.v, w);
            self.pairs.push(Pair::new(f.v, w));
        }
        true
    }

    fn next_free(&self, after: usize) -> Option<usize> {
        (after + 1..self.length).find(|&x| self.used & (1 << x) == 0)
    }
}

impl Iterator for EvenStarters {
    type Item = EvenStarter;

    fn next(&mut self) -> Option<EvenStarter> {
        while let Some(&frame) = self.stack.last() {
            self.undo(frame);
            if !self.advance() {
                self.stack.pop();
                continue;
            }
            match self.next_free(frame.v) {
                Some(v) => {
                    // the starter needs exactly one skip, so prune when the
                    // remaining free count has the wrong parity
                    let free = (v..self.length)
                        .filter(|&x| self.used & (1 << x) == 0)
                        .count();
                    if free % 2 == usize::from(self.skipped) {
                        continue;
                    }
                    self.stack.push(Frame {
                        v,
                        next: v + 1,
                        applied: None,
                    });
                }
                None => {
                    if self.skipped {
                        let s = EvenStarter::new(self.pairs.iter().copied(), self.length)
                            .expect("enumerator state is an even starter");
                        return Some(s);
                    }
                }
            }
        }
        None
    }
}

/// Whether the bipyramidal factorization induced by `s` is perfect.
///
/// Checks `F_0 ∪ F_i` for `i = 1..=n` only; every other pair of factors is a
/// translate of one of these.
pub fn induces_perfect(s: &EvenStarter) -> bool {
    let m = s.modulus();
    let (inf1, inf2) = (m, m + 1);
    let mut mate = vec![0usize; m + 2];
    for p in s.pairs() {
        mate[p.lo()] = p.hi();
        mate[p.hi()] = p.lo();
    }
    mate[0] = inf1;
    mate[inf1] = 0;
    mate[s.missing()] = inf2;
    mate[inf2] = s.missing();

    // F_i = F_0 + i, with the infinities fixed
    let partner_i = |v: usize, i: usize| -> usize {
        if v >= m {
            return (mate[v] + i) % m;
        }
        let u = mate[(v + m - i) % m];
        if u >= m {
            u
        } else {
            (u + i) % m
        }
    };
    (1..=m / 2).all(|i| {
        let mut len = 0;
        let mut v = inf1;
        loop {
            v = mate[v];
            v = partner_i(v, i);
            len += 2;
            if v == inf1 {
                break;
            }
        }
        len == m + 2
    })
}

/// Result of a count over one or more partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchTally {
    pub length: usize,
    pub starters_examined: u64,
    pub codes_found: u64,
    pub first_code: Option<ArrayCode>,
}

impl SearchTally {
    pub fn empty(length: usize) -> Self {
        SearchTally {
            length,
            starters_examined: 0,
            codes_found: 0,
            first_code: None,
        }
    }

    /// Folds a later partition into this one, keeping the earliest code.
    pub fn merge(mut self, later: SearchTally) -> SearchTally {
        debug_assert_eq!(self.length, later.length);
        self.starters_examined += later.starters_examined;
        self.codes_found += later.codes_found;
        if self.first_code.is_none() {
            self.first_code = later.first_code;
        }
        self
    }
}

fn tally(length: usize, starters: EvenStarters) -> SearchTally {
    let mut t = SearchTally::empty(length);
    for s in starters {
        t.starters_examined += 1;
        if induces_perfect(&s) {
            t.codes_found += 1;
            if t.first_code.is_none() {
                t.first_code = Some(build_ccode(&s).expect("perfect starter builds a code"));
            }
        }
    }
    t
}

/// Counts the starters in one partition that induce perfect factorizations.
pub fn count_partition(length: usize, part: Partition) -> Result<SearchTally> {
    Ok(tally(length, enumerate_partition(length, part)?))
}

/// Counts every even starter at `length` that induces a perfect
/// factorization, so twins are counted separately.
pub fn count_ccodes(length: usize) -> Result<SearchTally> {
    Ok(tally(length, enumerate_even_starters(length)?))
}

/// The first code in enumeration order, if any.
pub fn find_first_ccode(length: usize) -> Result<Option<ArrayCode>> {
    for s in enumerate_even_starters(length)? {
        if induces_perfect(&s) {
            return build_ccode(&s).map(Some);
        }
    }
    Ok(None)
}
