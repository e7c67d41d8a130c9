//! Exhaustive census of SQ matrices without zero lines.
//!
//! Rows are generated as nondecreasing sequences of nonzero words, which
//! already quotients out row order; a partial sequence is cut as soon as two
//! of its rows share exactly one 1. Survivors are tested for column
//! conditions and strong quadrangularity, then reduced to canonical forms.
//! The work is split by first row across the rayon pool and merged into an
//! ordered set, so the output does not depend on the number of workers.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equivalence::{canonical_form, is_symmetric_equivalent, ClassRecord};
use crate::error::{Error, Result};
use crate::forbidden::detect_any;
use crate::matrix::{
    is_indecomposable, is_regular, mask_for, rows_strongly_quadrangular, BinMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CensusFilter {
    pub require_indecomposable: bool,
    pub require_symmetric_equivalent: bool,
    pub require_regular: bool,
    /// Fixed row sum; only valid together with `require_regular`.
    pub sigma: Option<usize>,
}

impl CensusFilter {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn indecomposable() -> Self {
        Self {
            require_indecomposable: true,
            ..Self::default()
        }
    }

    pub fn regular(sigma: Option<usize>) -> Self {
        Self {
            require_regular: true,
            sigma,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusTable {
    pub degree: usize,
    pub filter: CensusFilter,
    #[serde(rename = "classes")]
    pub entries: Vec<ClassRecord>,
    pub total_classes: usize,
}

/// Largest degree for the unrestricted census.
pub const MAX_CENSUS_DEGREE: usize = 5;
/// Largest degree for the regular census.
pub const MAX_REGULAR_DEGREE: usize = 6;

/// All classes of degree-`n` SQ matrices with no zero line that pass `filter`.
///
/// Matrices that are not equivalent to their transpose give two classes.
pub fn enumerate_classes(n: usize, filter: CensusFilter) -> Result<CensusTable> {
    let limit = if filter.require_regular {
        MAX_REGULAR_DEGREE
    } else {
        MAX_CENSUS_DEGREE
    };
    if n == 0 || n > limit {
        return Err(Error::Unsupported(format!(
            "census degree {n} outside 1..={limit} for this filter"
        )));
    }
    if let Some(sigma) = filter.sigma {
        if !filter.require_regular {
            return Err(Error::Unsupported("sigma requires the regular filter".into()));
        }
        if sigma == 0 || sigma > n {
            return Err(Error::Unsupported(format!(
                "row sum {sigma} outside 1..={n}"
            )));
        }
    }

    let canon = canonical_classes(n, &filter);
    let entries: Vec<ClassRecord> = canon
        .into_par_iter()
        .filter(|m| !filter.require_symmetric_equivalent || is_symmetric_equivalent(m))
        .map(|m| ClassRecord::classify(&m, detect_any(&m).is_some()))
        .collect();
    Ok(CensusTable {
        degree: n,
        filter,
        total_classes: entries.len(),
        entries,
    })
}

/// Regular SQ classes of degree `n`, optionally with fixed row sum `sigma`.
pub fn enumerate_regular_classes(n: usize, sigma: Option<usize>) -> Result<CensusTable> {
    enumerate_classes(n, CensusFilter::regular(sigma))
}

/// Canonical forms of the classes, in increasing order.
fn canonical_classes(n: usize, filter: &CensusFilter) -> Vec<BinMatrix> {
    let full = mask_for(n);
    let candidates: Vec<u16> = (1..=full)
        .filter(|w| match (filter.require_regular, filter.sigma) {
            (_, Some(s)) => w.count_ones() as usize == s,
            _ => true,
        })
        .collect();

    let merged: BTreeSet<BinMatrix> = (0..candidates.len())
        .into_par_iter()
        .map(|first| {
            let mut found = BTreeSet::new();
            let mut rows = Vec::with_capacity(n);
            rows.push(candidates[first]);
            extend_rows(n, filter, &candidates, first, &mut rows, &mut found);
            found
        })
        .reduce(BTreeSet::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });
    merged.into_iter().collect()
}

fn extend_rows(
    n: usize,
    filter: &CensusFilter,
    candidates: &[u16],
    start: usize,
    rows: &mut Vec<u16>,
    found: &mut BTreeSet<BinMatrix>,
) {
    if rows.len() == n {
        if let Some(m) = accept(n, filter, rows) {
            found.insert(canonical_form(&m));
        }
        return;
    }
    let weight = rows[0].count_ones();
    for (idx, &w) in candidates.iter().enumerate().skip(start) {
        if filter.require_regular && w.count_ones() != weight {
            continue;
        }
        if rows.iter().any(|&r| (r & w).count_ones() == 1) {
            continue;
        }
        rows.push(w);
        extend_rows(n, filter, candidates, idx, rows, found);
        rows.pop();
    }
}

fn accept(n: usize, filter: &CensusFilter, rows: &[u16]) -> Option<BinMatrix> {
    let union = rows.iter().fold(0u16, |acc, &r| acc | r);
    if union != mask_for(n) {
        return None;
    }
    let m = BinMatrix::from_row_words(n, rows).ok()?;
    let t = m.transpose();
    let cols = t.rows();
    for (i, &a) in cols.iter().enumerate() {
        if cols[i + 1..].iter().any(|&b| (a & b).count_ones() == 1) {
            return None;
        }
    }
    if filter.require_regular && !is_regular(&m) {
        return None;
    }
    if !rows_strongly_quadrangular(rows) || !rows_strongly_quadrangular(cols) {
        return None;
    }
    if filter.require_indecomposable && !is_indecomposable(&m) {
        return None;
    }
    Some(m)
}

/// The six census sequences, indexed from degree 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub indecomposable: Vec<usize>,
    pub all: Vec<usize>,
    pub indecomposable_symmetric: Vec<usize>,
    pub symmetric: Vec<usize>,
    pub indecomposable_regular: Vec<usize>,
    pub regular: Vec<usize>,
}

impl CountTable {
    /// `(label, sequence)` pairs in display order.
    pub fn rows(&self) -> [(&'static str, &[usize]); 6] {
        [
            ("indecomposable SQ", &self.indecomposable),
            ("SQ", &self.all),
            ("indecomposable symmetric SQ", &self.indecomposable_symmetric),
            ("symmetric SQ", &self.symmetric),
            ("indecomposable regular SQ", &self.indecomposable_regular),
            ("regular SQ", &self.regular),
        ]
    }
}

impl fmt::Display for CountTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, seq) in self.rows() {
            let joined: Vec<String> = seq.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{label}: {}", joined.join(" "))?;
        }
        Ok(())
    }
}

/// Census counts for degrees `1..=max_n`; the regular rows run one degree
/// further, up to 6.
pub fn count_table(max_n: usize) -> Result<CountTable> {
    if max_n == 0 || max_n > MAX_CENSUS_DEGREE {
        return Err(Error::Unsupported(format!(
            "count table degree {max_n} outside 1..={MAX_CENSUS_DEGREE}"
        )));
    }
    let mut table = CountTable {
        indecomposable: vec![],
        all: vec![],
        indecomposable_symmetric: vec![],
        symmetric: vec![],
        indecomposable_regular: vec![],
        regular: vec![],
    };
    for n in 1..=max_n {
        let classes = canonical_classes(n, &CensusFilter::all());
        let flags: Vec<(bool, bool)> = classes
            .par_iter()
            .map(|m| (is_indecomposable(m), is_symmetric_equivalent(m)))
            .collect();
        table.all.push(flags.len());
        table.indecomposable.push(flags.iter().filter(|f| f.0).count());
        table.symmetric.push(flags.iter().filter(|f| f.1).count());
        table
            .indecomposable_symmetric
            .push(flags.iter().filter(|f| f.0 && f.1).count());
    }
    let regular_max = (max_n + 1).min(MAX_REGULAR_DEGREE);
    for n in 1..=regular_max {
        let classes = canonical_classes(n, &CensusFilter::regular(None));
        table.regular.push(classes.len());
        table
            .indecomposable_regular
            .push(classes.iter().filter(|m| is_indecomposable(m)).count());
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one() {
        let t = enumerate_classes(1, CensusFilter::all()).unwrap();
        assert_eq!(t.total_classes, 1);
        assert_eq!(t.entries[0].canonical, BinMatrix::ones(1).unwrap());
        assert_eq!(t.entries[0].aut_order, 1);
    }

    #[test]
    fn small_indecomposable_counts() {
        let counts: Vec<usize> = (1..=4)
            .map(|n| enumerate_classes(n, CensusFilter::indecomposable()).unwrap().total_classes)
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 10]);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(enumerate_classes(0, CensusFilter::all()).is_err());
        assert!(enumerate_classes(6, CensusFilter::all()).is_err());
        assert!(enumerate_classes(7, CensusFilter::regular(None)).is_err());
        assert!(enumerate_regular_classes(4, Some(5)).is_err());
        let bad = CensusFilter {
            sigma: Some(2),
            ..CensusFilter::all()
        };
        assert!(enumerate_classes(3, bad).is_err());
        assert!(count_table(6).is_err());
    }

    #[test]
    fn sigma_six_is_all_ones() {
        let t = enumerate_regular_classes(6, Some(6)).unwrap();
        assert_eq!(t.total_classes, 1);
        assert_eq!(t.entries[0].canonical, BinMatrix::ones(6).unwrap());
    }

    #[test]
    fn entries_are_sorted_and_canonical() {
        let t = enumerate_classes(4, CensusFilter::all()).unwrap();
        for w in t.entries.windows(2) {
            assert!(w[0].canonical < w[1].canonical);
        }
        for e in &t.entries {
            assert_eq!(canonical_form(&e.canonical), e.canonical);
        }
    }
}
