//! Timed, parallel front end to the exhaustive search.
//!
//! Each [`Partition`] is counted on the rayon pool and the tallies are merged
//! in partition order, so the report does not depend on scheduling.

use std::time::{Duration, Instant};

use ccode_core::search::{self, Partition, SearchTally};
use ccode_core::ArrayCode;
use rayon::prelude::*;

/// Outcome of a full count at one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub length: usize,
    pub starters_examined: u64,
    pub codes_found: u64,
    pub first_code: Option<ArrayCode>,
    pub elapsed: Duration,
}

impl SearchReport {
    /// Equality ignoring `elapsed`.
    pub fn same_result(&self, other: &SearchReport) -> bool {
        self.length == other.length
            && self.starters_examined == other.starters_examined
            && self.codes_found == other.codes_found
            && self.first_code == other.first_code
    }
}

/// Counts every even starter at `length` that induces a perfect
/// one-factorization.
pub fn count_ccodes(length: usize) -> ccode_core::Result<SearchReport> {
    let start = Instant::now();
    let parts = search::partitions(length)?;
    let tallies: Vec<SearchTally> = parts
        .par_iter()
        .map(|&p| search::count_partition(length, p))
        .collect::<ccode_core::Result<_>>()?;
    let total = tallies
        .into_iter()
        .fold(SearchTally::empty(length), SearchTally::merge);
    Ok(SearchReport {
        length,
        starters_examined: total.starters_examined,
        codes_found: total.codes_found,
        first_code: total.first_code,
        elapsed: start.elapsed(),
    })
}

/// The first code in enumeration order. Later partitions are abandoned once
/// an earlier one has a hit.
pub fn find_first_ccode(length: usize) -> ccode_core::Result<Option<ArrayCode>> {
    let parts = search::partitions(length)?;
    parts
        .par_iter()
        .map(|&p| first_in(length, p))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .unwrap_or(Ok(None))
}

fn first_in(length: usize, part: Partition) -> ccode_core::Result<Option<ArrayCode>> {
    for s in search::enumerate_partition(length, part)? {
        if search::induces_perfect(&s) {
            return ccode_core::code::build_ccode(&s).map(Some);
        }
    }
    Ok(None)
}
