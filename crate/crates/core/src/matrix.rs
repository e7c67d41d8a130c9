//! Square (0,1)-matrices and their single-matrix predicates.
//!
//! Rows are stored as `u16` words with column `j` at bit `n - 1 - j`, so the
//! integer order of two rows is the same as the order of their `0`/`1`
//! strings. This is what makes the canonical form in [`crate::equivalence`]
//! a plain integer comparison.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported degree; one row fits in a `u16`.
pub const MAX_DEGREE: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinMatrix {
    degree: u8,
    rows: [u16; MAX_DEGREE],
}

impl BinMatrix {
    /// All-zero matrix of degree `n`.
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::InvalidDegree(n));
        }
        Ok(Self {
            degree: n as u8,
            rows: [0; MAX_DEGREE],
        })
    }

    /// The all-ones matrix `J_n`.
    pub fn ones(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        let full = m.row_mask();
        for r in m.rows.iter_mut().take(n) {
            *r = full;
        }
        Ok(m)
    }

    /// The identity matrix `I_n`.
    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// Builds a matrix from row words in the internal bit convention.
    pub fn from_row_words(n: usize, words: &[u16]) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        if words.len() != n {
            return Err(Error::Shape(format!(
                "expected {n} rows, got {}",
                words.len()
            )));
        }
        let mask = m.row_mask();
        for (i, &w) in words.iter().enumerate() {
            if w & !mask != 0 {
                return Err(Error::Shape(format!("row {i} has bits beyond column {n}")));
            }
            m.rows[i] = w;
        }
        Ok(m)
    }

    /// Builds a matrix from `'0'`/`'1'` row strings.
    pub fn from_row_strs<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.chars().count() != n {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {n}",
                    row.chars().count()
                )));
            }
            for (j, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    other => {
                        return Err(Error::Shape(format!(
                            "row {i} column {j}: unexpected character {other:?}"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// Mask with the low `n` bits set.
    #[inline]
    pub fn row_mask(&self) -> u16 {
        mask_for(self.degree())
    }

    #[inline]
    fn bit(&self, j: usize) -> u16 {
        1 << (self.degree() - 1 - j)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] & self.bit(j) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let b = self.bit(j);
        if value {
            self.rows[i] |= b;
        } else {
            self.rows[i] &= !b;
        }
    }

    /// Row `i` as a word (column `j` at bit `n - 1 - j`).
    #[inline]
    pub fn row(&self, i: usize) -> u16 {
        self.rows[i]
    }

    /// The stored rows.
    #[inline]
    pub fn rows(&self) -> &[u16] {
        &self.rows[..self.degree()]
    }

    /// Column `j` as a word (row `i` at bit `n - 1 - i`).
    pub fn col(&self, j: usize) -> u16 {
        let n = self.degree();
        let b = self.bit(j);
        let mut word = 0u16;
        for i in 0..n {
            if self.rows[i] & b != 0 {
                word |= 1 << (n - 1 - i);
            }
        }
        word
    }

    pub fn transpose(&self) -> Self {
        let n = self.degree();
        let mut t = *self;
        for j in 0..n {
            t.rows[j] = self.col(j);
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn ones_count(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Number of zero entries, `n² − ones`.
    pub fn zero_count(&self) -> usize {
        let n = self.degree();
        n * n - self.ones_count()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.rows().iter().map(|r| r.count_ones() as usize).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.degree())
            .map(|j| self.col(j).count_ones() as usize)
            .collect()
    }

    /// Returns the matrix with entries `m'[i][j] = m[row_perm[i]][col_perm[j]]`.
    ///
    /// Both slices must be permutations of `0..n`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let n = self.degree();
        debug_assert_eq!(row_perm.len(), n);
        debug_assert_eq!(col_perm.len(), n);
        let mut out = *self;
        for i in 0..n {
            out.rows[i] = permute_word(self.rows[row_perm[i]], col_perm, n);
        }
        out
    }

    /// Row `i` rendered as a `0`/`1` string.
    pub fn row_string(&self, i: usize) -> String {
        (0..self.degree())
            .map(|j| if self.get(i, j) { '1' } else { '0' })
            .collect()
    }

    pub fn row_strings(&self) -> Vec<String> {
        (0..self.degree()).map(|i| self.row_string(i)).collect()
    }

    /// Renders the matrix text format: degree line, then one line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.degree());
        for row in self.row_strings() {
            s.push_str(&row);
            s.push('\n');
        }
        s
    }

    /// Parses the matrix text format.
    ///
    /// Line 1 holds the degree in decimal; the following `n` lines hold `n`
    /// characters each. Positions in errors are 1-based.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| parse_err(1, 1, "empty input"))?;
        let header = header.trim_end_matches('\r');
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| parse_err(1, 1, format!("expected a degree, found {header:?}")))?;
        if n == 0 || n > MAX_DEGREE {
            return Err(parse_err(
                1,
                1,
                format!("degree {n} outside supported range 1..={MAX_DEGREE}"),
            ));
        }
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            let line_no = i + 2;
            let line = lines
                .next()
                .ok_or_else(|| parse_err(line_no, 1, format!("missing row {} of {n}", i + 1)))?
                .trim_end_matches('\r');
            let mut count = 0;
            for (j, ch) in line.chars().enumerate() {
                if j >= n {
                    return Err(parse_err(line_no, j + 1, format!("row longer than {n}")));
                }
                match ch {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    other => {
                        return Err(parse_err(
                            line_no,
                            j + 1,
                            format!("expected '0' or '1', found {other:?}"),
                        ))
                    }
                }
                count += 1;
            }
            if count < n {
                return Err(parse_err(
                    line_no,
                    count + 1,
                    format!("row has {count} entries, expected {n}"),
                ));
            }
        }
        for (k, line) in lines.enumerate() {
            if !line.trim().is_empty() {
                return Err(parse_err(n + 2 + k, 1, "unexpected content after last row"));
            }
        }
        Ok(m)
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

#[inline]
pub(crate) fn mask_for(n: usize) -> u16 {
    if n >= 16 {
        u16::MAX
    } else {
        (1u16 << n) - 1
    }
}

/// Reorders the bits of a row word: output column `j` takes input column `perm[j]`.
#[inline]
pub(crate) fn permute_word(word: u16, perm: &[usize], n: usize) -> u16 {
    let mut out = 0u16;
    for (j, &src) in perm.iter().enumerate() {
        if word & (1 << (n - 1 - src)) != 0 {
            out |= 1 << (n - 1 - j);
        }
    }
    out
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinMatrix[{}]", self.row_strings().join(","))
    }
}

impl fmt::Display for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.row_strings().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            f.write_str(row)?;
        }
        Ok(())
    }
}

impl FromStr for BinMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

impl Serialize for BinMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BinMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<String>::deserialize(deserializer)?;
        Self::from_row_strs(&rows).map_err(serde::de::Error::custom)
    }
}

/// Sorted multiset of row sums (Λ).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowSumMultiset(Vec<usize>);

impl RowSumMultiset {
    pub fn sums(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

pub fn row_sum_multiset(m: &BinMatrix) -> RowSumMultiset {
    let mut sums = m.row_sums();
    sums.sort_unstable();
    RowSumMultiset(sums)
}

pub fn col_sum_multiset(m: &BinMatrix) -> RowSumMultiset {
    row_sum_multiset(&m.transpose())
}

#[inline]
fn dot(a: u16, b: u16) -> u32 {
    (a & b).count_ones()
}

fn rows_quadrangular(rows: &[u16]) -> bool {
    for (i, &a) in rows.iter().enumerate() {
        for &b in &rows[i + 1..] {
            if dot(a, b) == 1 {
                return false;
            }
        }
    }
    true
}

/// No two distinct rows, and no two distinct columns, share exactly one 1.
pub fn is_quadrangular(m: &BinMatrix) -> bool {
    rows_quadrangular(m.rows()) && rows_quadrangular(m.transpose().rows())
}

/// Row-strong quadrangularity over every subset of rows.
///
/// A subset `S` qualifies when each of its rows meets some other row of `S`;
/// every qualifying `S` needs at least `|S|` columns holding two or more of
/// its ones.
pub fn is_row_strongly_quadrangular(m: &BinMatrix) -> bool {
    rows_strongly_quadrangular(m.rows())
}

pub(crate) fn rows_strongly_quadrangular(rows: &[u16]) -> bool {
    let n = rows.len();
    // neighbours[i]: rows other than i sharing a 1 with row i
    let mut neighbours = [0u32; MAX_DEGREE];
    for i in 0..n {
        for j in 0..n {
            if i != j && rows[i] & rows[j] != 0 {
                neighbours[i] |= 1 << j;
            }
        }
    }
    for subset in 1u32..(1u32 << n) {
        let size = subset.count_ones();
        if size < 2 {
            continue;
        }
        let mut linked = true;
        let mut once = 0u16;
        let mut twice = 0u16;
        let mut rest = subset;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if neighbours[i] & subset == 0 {
                linked = false;
                break;
            }
            twice |= once & rows[i];
            once |= rows[i];
        }
        if linked && twice.count_ones() < size {
            return false;
        }
    }
    true
}

pub fn is_strongly_quadrangular(m: &BinMatrix) -> bool {
    is_row_strongly_quadrangular(m) && is_row_strongly_quadrangular(&m.transpose())
}

/// True iff no `r × (n − r)` all-zero submatrix exists for `1 ≤ r < n`.
pub fn is_indecomposable(m: &BinMatrix) -> bool {
    let n = m.degree();
    let mask = m.row_mask();
    let rows = m.rows();
    for subset in 1u32..((1u32 << n) - 1) {
        let mut union = 0u16;
        let mut rest = subset;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            union |= rows[i];
        }
        let zero_cols = (!union & mask).count_ones();
        if zero_cols + subset.count_ones() >= n as u32 {
            return false;
        }
    }
    true
}

pub fn has_zero_line(m: &BinMatrix) -> bool {
    let rows = m.rows();
    let union = rows.iter().fold(0u16, |acc, &r| acc | r);
    rows.contains(&0) || union != m.row_mask()
}

/// Equal row sums and equal column sums.
pub fn is_regular(m: &BinMatrix) -> bool {
    is_row_regular(m) && is_row_regular(&m.transpose())
}

/// Equal row sums only (all elements of Λ coincide).
pub fn is_row_regular(m: &BinMatrix) -> bool {
    let sums = m.row_sums();
    sums.windows(2).all(|w| w[0] == w[1])
}

pub fn zero_count(m: &BinMatrix) -> usize {
    m.zero_count()
}

pub fn transpose(m: &BinMatrix) -> BinMatrix {
    m.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> BinMatrix {
        BinMatrix::from_row_strs(rows).unwrap()
    }

    pub(crate) fn matrix_a() -> BinMatrix {
        mat(&["101110", "011101", "111100", "110011", "110011", "001111"])
    }

    #[test]
    fn quadrangular_examples() {
        assert!(is_quadrangular(&BinMatrix::ones(3).unwrap()));
        assert!(!is_quadrangular(&mat(&["11", "01"])));
        assert!(is_quadrangular(&matrix_a()));
    }

    #[test]
    fn row_strong_quadrangularity_examples() {
        assert!(is_row_strongly_quadrangular(&BinMatrix::ones(2).unwrap()));
        assert!(is_row_strongly_quadrangular(&BinMatrix::identity(4).unwrap()));
        assert!(!is_row_strongly_quadrangular(&mat(&["110", "110", "111"])));
    }

    #[test]
    fn strong_quadrangularity_examples() {
        assert!(is_strongly_quadrangular(&matrix_a()));
        assert!(is_strongly_quadrangular(&BinMatrix::ones(5).unwrap()));
        assert!(!is_strongly_quadrangular(&mat(&["110", "110", "111"])));
    }

    #[test]
    fn indecomposable_examples() {
        assert!(is_indecomposable(&BinMatrix::ones(4).unwrap()));
        assert!(!is_indecomposable(&BinMatrix::identity(2).unwrap()));
        assert!(is_indecomposable(&mat(&["1011", "0111", "1011", "0111"])));
    }

    #[test]
    fn zero_line_examples() {
        assert!(!has_zero_line(&BinMatrix::ones(3).unwrap()));
        assert!(has_zero_line(&mat(&["00", "11"])));
        assert!(has_zero_line(&mat(&["10", "10"])));
        assert!(!has_zero_line(&BinMatrix::identity(5).unwrap()));
    }

    #[test]
    fn row_sum_examples() {
        assert_eq!(row_sum_multiset(&BinMatrix::ones(3).unwrap()).sums(), &[3, 3, 3]);
        let dita = mat(&["1011", "0111", "1011", "0111"]);
        assert_eq!(row_sum_multiset(&dita).sums(), &[3, 3, 3, 3]);
        assert_eq!(row_sum_multiset(&mat(&["10", "11"])).sums(), &[1, 2]);
    }

    #[test]
    fn regular_examples() {
        assert!(is_regular(&matrix_a()));
        assert!(is_regular(&BinMatrix::ones(4).unwrap()));
        assert!(!is_regular(&mat(&["11", "01"])));
        // equal row sums but unequal column sums
        let skew = mat(&["110", "110", "110"]);
        assert!(is_row_regular(&skew));
        assert!(!is_regular(&skew));
    }

    #[test]
    fn zero_count_examples() {
        assert_eq!(zero_count(&BinMatrix::ones(4).unwrap()), 0);
        assert_eq!(zero_count(&matrix_a()), 12);
    }

    #[test]
    fn transpose_and_columns() {
        let m = mat(&["100", "110", "011"]);
        assert_eq!(m.transpose(), mat(&["110", "011", "001"]));
        assert_eq!(m.col_sums(), vec![2, 2, 1]);
    }

    #[test]
    fn permuted_follows_index_convention() {
        let m = mat(&["100", "110", "011"]);
        let p = m.permuted(&[2, 0, 1], &[1, 2, 0]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p.get(i, j), m.get([2, 0, 1][i], [1, 2, 0][j]));
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let a = matrix_a();
        assert_eq!(BinMatrix::parse_text(&a.to_text()).unwrap(), a);
        let no_trailing = a.to_text().trim_end().to_string();
        assert_eq!(no_trailing.parse::<BinMatrix>().unwrap(), a);
    }

    #[test]
    fn parse_errors_carry_positions() {
        match BinMatrix::parse_text("3\n101\n1x1\n111\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 2)),
            other => panic!("unexpected {other:?}"),
        }
        match BinMatrix::parse_text("2\n10\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match BinMatrix::parse_text("2\n101\n11\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(BinMatrix::parse_text("17\n").is_err());
        assert!(BinMatrix::parse_text("abc\n").is_err());
        assert!(BinMatrix::parse_text("1\n1\n1\n").is_err());
    }

    #[test]
    fn degree_bounds() {
        assert!(BinMatrix::zeros(0).is_err());
        assert!(BinMatrix::zeros(17).is_err());
        let j16 = BinMatrix::ones(16).unwrap();
        assert_eq!(j16.zero_count(), 0);
        assert_eq!(j16.transpose(), j16);
    }
}
