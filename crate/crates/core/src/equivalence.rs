//! Equivalence under independent row and column permutations.
//!
//! Two matrices are equivalent when `P·M₁·Q = M₂` for permutation matrices
//! `P` and `Q`. The canonical representative of a class is the
//! lexicographically least image, reading the rows top to bottom as one
//! `0`/`1` string.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    col_sum_multiset, is_regular, row_sum_multiset, BinMatrix, MAX_DEGREE,
};

/// A row permutation paired with a column permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermPair {
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
}

impl PermPair {
    pub fn new(row_perm: Vec<usize>, col_perm: Vec<usize>) -> Result<Self> {
        if row_perm.len() != col_perm.len() {
            return Err(Error::DegreeMismatch(row_perm.len(), col_perm.len()));
        }
        if !is_permutation(&row_perm) || !is_permutation(&col_perm) {
            return Err(Error::Shape("not a permutation of 0..n".into()));
        }
        Ok(Self { row_perm, col_perm })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            row_perm: (0..n).collect(),
            col_perm: (0..n).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut row_perm: Vec<usize> = (0..n).collect();
        let mut col_perm: Vec<usize> = (0..n).collect();
        row_perm.shuffle(rng);
        col_perm.shuffle(rng);
        Self { row_perm, col_perm }
    }

    pub fn row_perm(&self) -> &[usize] {
        &self.row_perm
    }

    pub fn col_perm(&self) -> &[usize] {
        &self.col_perm
    }

    /// `m'[i][j] = m[row_perm[i]][col_perm[j]]`.
    pub fn apply(&self, m: &BinMatrix) -> Result<BinMatrix> {
        if self.row_perm.len() != m.degree() {
            return Err(Error::DegreeMismatch(self.row_perm.len(), m.degree()));
        }
        Ok(m.permuted(&self.row_perm, &self.col_perm))
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Lexicographically least matrix in the equivalence class of `m`.
///
/// Exact branch-and-bound over row choices. Columns are tracked as an ordered
/// partition into cells of still-interchangeable positions; placing a row
/// puts its zeros before its ones inside every cell and splits the cell.
/// Rows whose best placement ties are all explored.
pub fn canonical_form(m: &BinMatrix) -> BinMatrix {
    let n = m.degree();
    let mut values: Vec<(u16, usize)> = Vec::new();
    let mut sorted: Vec<u16> = m.rows().to_vec();
    sorted.sort_unstable();
    for r in sorted {
        match values.last_mut() {
            Some((v, c)) if *v == r => *c += 1,
            _ => values.push((r, 1)),
        }
    }
    let mut search = CanonSearch {
        n,
        best: None,
        prefix: [0; MAX_DEGREE],
    };
    let cells = vec![m.row_mask()];
    search.descend(0, &mut values, &cells);
    let best = search.best.expect("search visits at least one leaf");
    BinMatrix::from_row_words(n, &best[..n]).expect("canonical rows fit the degree")
}

struct CanonSearch {
    n: usize,
    best: Option<[u16; MAX_DEGREE]>,
    prefix: [u16; MAX_DEGREE],
}

impl CanonSearch {
    fn descend(&mut self, depth: usize, values: &mut [(u16, usize)], cells: &[u16]) {
        if depth == self.n {
            let better = match &self.best {
                None => true,
                Some(b) => self.prefix[..self.n] < b[..self.n],
            };
            if better {
                self.best = Some(self.prefix);
            }
            return;
        }
        let mut min_word = u16::MAX;
        let mut words = [u16::MAX; MAX_DEGREE];
        for (k, &(v, c)) in values.iter().enumerate() {
            if c > 0 {
                let w = place(v, cells, self.n);
                words[k] = w;
                min_word = min_word.min(w);
            }
        }
        if let Some(b) = &self.best {
            match self.prefix[..depth].cmp(&b[..depth]) {
                std::cmp::Ordering::Equal if min_word > b[depth] => return,
                std::cmp::Ordering::Greater => return,
                _ => {}
            }
        }
        self.prefix[depth] = min_word;
        for k in 0..values.len() {
            if values[k].1 == 0 || words[k] != min_word {
                continue;
            }
            let v = values[k].0;
            let refined = refine(v, cells);
            values[k].1 -= 1;
            self.descend(depth + 1, values, &refined);
            values[k].1 += 1;
            // restore: a deeper level may have overwritten it
            self.prefix[depth] = min_word;
        }
    }
}

/// Best word for row `v` when each cell is filled zeros-first.
fn place(v: u16, cells: &[u16], n: usize) -> u16 {
    let mut word = 0u16;
    let mut pos = n;
    for &cell in cells {
        let size = cell.count_ones() as usize;
        let ones = (v & cell).count_ones() as usize;
        pos -= size;
        // ones occupy the last `ones` positions of the cell
        word |= (((1u32 << ones) - 1) as u16) << pos;
    }
    word
}

fn refine(v: u16, cells: &[u16]) -> Vec<u16> {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for &cell in cells {
        let zeros = cell & !v;
        let ones = cell & v;
        if zeros != 0 {
            out.push(zeros);
        }
        if ones != 0 {
            out.push(ones);
        }
    }
    out
}

/// True iff `m1` and `m2` lie in the same class.
///
/// Zero counts and line-sum multisets are compared before canonical forms.
pub fn are_equivalent(m1: &BinMatrix, m2: &BinMatrix) -> Result<bool> {
    if m1.degree() != m2.degree() {
        return Err(Error::DegreeMismatch(m1.degree(), m2.degree()));
    }
    if m1.zero_count() != m2.zero_count()
        || row_sum_multiset(m1) != row_sum_multiset(m2)
        || col_sum_multiset(m1) != col_sum_multiset(m2)
    {
        return Ok(false);
    }
    Ok(canonical_form(m1) == canonical_form(m2))
}

/// Number of pairs `(P, Q)` with `P·M·Q = M`.
///
/// Counts the column permutations that leave the row multiset unchanged and
/// multiplies by the row permutations that only shuffle equal rows.
pub fn aut_group_order(m: &BinMatrix) -> u128 {
    let n = m.degree();
    let rows = m.rows();

    let mut row_factor: u128 = 1;
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    let mut run = 1u128;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            row_factor *= factorial(run);
            run = 1;
        }
    }
    row_factor *= factorial(run);

    // target[j]: sorted multiset of row prefixes over the first j+1 columns
    let mut targets = Vec::with_capacity(n);
    for j in 0..n {
        let shift = n - 1 - j;
        let mut p: Vec<u16> = rows.iter().map(|&r| r >> shift).collect();
        p.sort_unstable();
        targets.push(p);
    }
    let cols: Vec<u16> = (0..n).map(|j| m.col(j)).collect();
    let mut search = AutSearch {
        n,
        rows,
        cols: &cols,
        targets: &targets,
        used: [false; MAX_DEGREE],
        prefixes: vec![0; n],
    };
    row_factor * search.count(0)
}

struct AutSearch<'a> {
    n: usize,
    rows: &'a [u16],
    cols: &'a [u16],
    targets: &'a [Vec<u16>],
    used: [bool; MAX_DEGREE],
    prefixes: Vec<u16>,
}

impl AutSearch<'_> {
    fn count(&mut self, depth: usize) -> u128 {
        if depth == self.n {
            return 1;
        }
        let n = self.n;
        let saved = self.prefixes.clone();
        let mut total = 0u128;
        for c in 0..n {
            if self.used[c] {
                continue;
            }
            // one representative per class of identical unused columns
            if (0..c).any(|d| !self.used[d] && self.cols[d] == self.cols[c]) {
                continue;
            }
            let twins = (c..n)
                .filter(|&d| !self.used[d] && self.cols[d] == self.cols[c])
                .count() as u128;
            let bit = 1u16 << (n - 1 - c);
            for (i, p) in self.prefixes.iter_mut().enumerate() {
                *p = (saved[i] << 1) | u16::from(self.rows[i] & bit != 0);
            }
            let mut sorted = self.prefixes.clone();
            sorted.sort_unstable();
            if sorted == self.targets[depth] {
                self.used[c] = true;
                total += twins * self.count(depth + 1);
                self.used[c] = false;
            }
        }
        self.prefixes = saved;
        total
    }
}

pub(crate) fn factorial(k: u128) -> u128 {
    (1..=k).product()
}

/// `(n!)² / |Aut M|`, the number of matrices equivalent to `m`.
pub fn class_size(m: &BinMatrix) -> u128 {
    let n = m.degree() as u128;
    let total = factorial(n) * factorial(n);
    let aut = aut_group_order(m);
    assert!(
        total.is_multiple_of(aut),
        "automorphism order {aut} does not divide (n!)^2 = {total}"
    );
    total / aut
}

/// Row permutation `ρ` with `m[ρ(a)][b] = m[ρ(b)][a]`, if one exists.
///
/// With `R` the permutation matrix of `ρ`, this is `R·M·R = Mᵀ`, which is
/// the same statement as `R·M` being symmetric. Conjugating `R·M` by any
/// further permutation keeps it symmetric, so a hit is a symmetric
/// representative `R·M` of the class.
pub fn symmetrizing_row_permutation(m: &BinMatrix) -> Option<Vec<usize>> {
    let n = m.degree();
    let row_sums = m.row_sums();
    let col_sums = m.col_sums();
    let mut rho = vec![usize::MAX; n];
    let mut used = [false; MAX_DEGREE];
    if conjugator_search(m, &row_sums, &col_sums, 0, &mut rho, &mut used) {
        Some(rho)
    } else {
        None
    }
}

fn conjugator_search(
    m: &BinMatrix,
    row_sums: &[usize],
    col_sums: &[usize],
    a: usize,
    rho: &mut [usize],
    used: &mut [bool; MAX_DEGREE],
) -> bool {
    let n = m.degree();
    if a == n {
        return true;
    }
    for x in 0..n {
        if used[x] || row_sums[x] != col_sums[a] {
            continue;
        }
        // identical unused rows give identical subtrees
        if (0..x).any(|y| !used[y] && m.row(y) == m.row(x)) {
            continue;
        }
        let consistent = (0..a).all(|c| m.get(x, c) == m.get(rho[c], a));
        if !consistent {
            continue;
        }
        rho[a] = x;
        used[x] = true;
        if conjugator_search(m, row_sums, col_sums, a + 1, rho, used) {
            return true;
        }
        used[x] = false;
        rho[a] = usize::MAX;
    }
    false
}

/// True iff some `P·M·Q` is symmetric.
pub fn is_symmetric_equivalent(m: &BinMatrix) -> bool {
    match symmetrizing_row_permutation(m) {
        Some(rho) => {
            let identity: Vec<usize> = (0..m.degree()).collect();
            let candidate = m.permuted(&rho, &identity);
            debug_assert!(candidate.is_symmetric());
            candidate.is_symmetric()
        }
        None => false,
    }
}

/// True iff `m` is equivalent to its transpose.
pub fn is_transpose_equivalent(m: &BinMatrix) -> bool {
    are_equivalent(m, &m.transpose()).expect("transpose has the same degree")
}

/// Canonical representative with its class invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRecord {
    pub canonical: BinMatrix,
    pub aut_order: u128,
    /// S: equivalent to a symmetric matrix.
    pub flag_symmetric: bool,
    /// T: not equivalent to its transpose.
    pub flag_transpose_inequivalent: bool,
    /// R: constant row and column sums.
    pub flag_regular: bool,
    /// N: a forbidden block certifies that no unitary has this support.
    pub flag_no_unitary: bool,
    pub zero_count: usize,
}

impl ClassRecord {
    /// Classifies `m`, leaving the N flag for the caller to supply.
    pub fn classify(m: &BinMatrix, no_unitary: bool) -> Self {
        let canonical = canonical_form(m);
        Self {
            aut_order: aut_group_order(&canonical),
            flag_symmetric: is_symmetric_equivalent(&canonical),
            flag_transpose_inequivalent: !is_transpose_equivalent(&canonical),
            flag_regular: is_regular(&canonical),
            flag_no_unitary: no_unitary,
            zero_count: canonical.zero_count(),
            canonical,
        }
    }

    pub fn degree(&self) -> usize {
        self.canonical.degree()
    }

    /// Index string in the order N, R, S, T (e.g. `"NRS"`).
    pub fn flag_string(&self) -> String {
        let mut s = String::new();
        if self.flag_no_unitary {
            s.push('N');
        }
        if self.flag_regular {
            s.push('R');
        }
        if self.flag_symmetric {
            s.push('S');
        }
        if self.flag_transpose_inequivalent {
            s.push('T');
        }
        s
    }
}

#[derive(Serialize, Deserialize)]
struct FlagsJson {
    #[serde(rename = "S")]
    s: bool,
    #[serde(rename = "T")]
    t: bool,
    #[serde(rename = "R")]
    r: bool,
    #[serde(rename = "N")]
    n: bool,
}

#[derive(Serialize, Deserialize)]
struct ClassRecordJson {
    degree: usize,
    canonical: BinMatrix,
    aut_order: u128,
    flags: FlagsJson,
    zeros: usize,
}

impl Serialize for ClassRecord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ClassRecordJson {
            degree: self.degree(),
            canonical: self.canonical,
            aut_order: self.aut_order,
            flags: FlagsJson {
                s: self.flag_symmetric,
                t: self.flag_transpose_inequivalent,
                r: self.flag_regular,
                n: self.flag_no_unitary,
            },
            zeros: self.zero_count,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClassRecord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ClassRecordJson::deserialize(deserializer)?;
        if raw.canonical.degree() != raw.degree {
            return Err(serde::de::Error::custom("degree does not match canonical rows"));
        }
        Ok(Self {
            canonical: raw.canonical,
            aut_order: raw.aut_order,
            flag_symmetric: raw.flags.s,
            flag_transpose_inequivalent: raw.flags.t,
            flag_regular: raw.flags.r,
            flag_no_unitary: raw.flags.n,
            zero_count: raw.zeros,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mat(rows: &[&str]) -> BinMatrix {
        BinMatrix::from_row_strs(rows).unwrap()
    }

    #[test]
    fn canonical_examples() {
        for n in 1..=6 {
            let j = BinMatrix::ones(n).unwrap();
            assert_eq!(canonical_form(&j), j);
        }
        assert_eq!(canonical_form(&mat(&["11", "10"])), mat(&["01", "11"]));
    }

    #[test]
    fn canonical_orbit_invariance_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = mat(&["10110", "01011", "11100", "00111", "10001"]);
        let c = canonical_form(&m);
        assert_eq!(canonical_form(&c), c);
        for _ in 0..200 {
            let p = PermPair::random(5, &mut rng);
            assert_eq!(canonical_form(&p.apply(&m).unwrap()), c);
        }
    }

    #[test]
    fn equivalence_examples() {
        let j3 = BinMatrix::ones(3).unwrap();
        let mut j3_hole = j3;
        j3_hole.set(1, 2, false);
        assert!(!are_equivalent(&j3, &j3_hole).unwrap());
        let four_zeros_a = mat(&["0111", "1011", "1101", "1110"]);
        let four_zeros_b = mat(&["1011", "0111", "1011", "0111"]);
        assert_eq!(four_zeros_a.zero_count(), 4);
        assert_eq!(four_zeros_b.zero_count(), 4);
        assert!(!are_equivalent(&four_zeros_a, &four_zeros_b).unwrap());
        assert!(are_equivalent(&j3, &BinMatrix::ones(4).unwrap()).is_err());
    }

    #[test]
    fn aut_examples() {
        assert_eq!(aut_group_order(&BinMatrix::ones(5).unwrap()), 14400);
        assert_eq!(aut_group_order(&BinMatrix::ones(1).unwrap()), 1);
        assert_eq!(aut_group_order(&BinMatrix::ones(2).unwrap()), 4);
        assert_eq!(aut_group_order(&BinMatrix::identity(4).unwrap()), 24);
    }

    #[test]
    fn class_size_examples() {
        assert_eq!(class_size(&BinMatrix::ones(5).unwrap()), 1);
        assert_eq!(class_size(&BinMatrix::ones(1).unwrap()), 1);
        assert_eq!(class_size(&mat(&["0111", "1111", "1111", "1111"])), 16);
    }

    #[test]
    fn symmetric_equivalence_examples() {
        assert!(is_symmetric_equivalent(&mat(&["011", "101", "110"])));
        assert!(is_symmetric_equivalent(&mat(&["10111", "01111", "11110", "11001", "11001"])));
        assert!(is_symmetric_equivalent(&mat(&["10111", "01111", "11111", "11001", "11001"])));
        let t24 = mat(&["0011", "1111", "1111", "1111"]);
        assert!(!is_symmetric_equivalent(&t24));
        // a non-symmetric matrix that becomes symmetric after a row swap
        assert!(is_symmetric_equivalent(&mat(&["01", "10"]).permuted(&[1, 0], &[0, 1])));
        assert!(is_symmetric_equivalent(&mat(&["110", "011", "001"])));
    }

    #[test]
    fn transpose_equivalence_examples() {
        assert!(is_transpose_equivalent(&mat(&["011", "101", "110"])));
        assert!(!is_transpose_equivalent(&mat(&["1011", "0111", "1011", "0111"])));
        let a = mat(&["101110", "011101", "111100", "110011", "110011", "001111"]);
        assert!(is_transpose_equivalent(&a));
        assert!(is_symmetric_equivalent(&a));
    }

    #[test]
    fn class_record_flags() {
        let rec = ClassRecord::classify(&mat(&["0011", "1111", "1111", "1111"]), false);
        assert_eq!(rec.aut_order, 24);
        assert_eq!(rec.flag_string(), "T");
        assert_eq!(canonical_form(&rec.canonical), rec.canonical);
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["degree"], 4);
        assert_eq!(json["flags"]["T"], true);
        assert_eq!(json["zeros"], 2);
        let back: ClassRecord = serde_json::from_value(json).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn perm_pair_validation() {
        assert!(PermPair::new(vec![0, 0], vec![0, 1]).is_err());
        assert!(PermPair::new(vec![0, 1], vec![0]).is_err());
        let p = PermPair::new(vec![1, 0], vec![0, 1]).unwrap();
        assert_eq!(p.apply(&mat(&["10", "11"])).unwrap(), mat(&["11", "10"]));
    }
}
