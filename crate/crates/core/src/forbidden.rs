//! Block configurations that rule out unitary support.
//!
//! Both configurations start from three rows `r1, r2, r3` and two columns
//! `c1, c2` carrying the block `Q = [[1,0],[0,1],[1,1]]`, next to columns on
//! which the three rows are all ones. For (0,1)-vectors, orthogonal means
//! disjoint supports.
//!
//! * [`BlockKind::CondK`]: `J` is a set of `k ≥ 1` all-ones columns. The
//!   three rows restricted to the remaining columns (`X`) are pairwise
//!   disjoint, and on the other rows no row meets both `{c1, c2}` and `J`.
//! * [`BlockKind::NewCond`]: `J` is a pair of all-ones columns. On the other
//!   rows the two `J` columns are disjoint, and no row meets both
//!   `{c1, c2}` and `J`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::BinMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    CondK,
    NewCond,
}

/// Row and column selections certifying a block configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockEmbedding {
    pub kind: BlockKind,
    /// Indices refer to the transpose of the matrix.
    pub transposed: bool,
    pub rows: [usize; 3],
    pub q_cols: [usize; 2],
    pub j_cols: Vec<usize>,
}

/// How the `J` columns of a CondK block are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JSearch {
    /// Take every column on which the three rows are all ones.
    #[default]
    Maximal,
    /// Try every nonempty subset of those columns.
    Exhaustive,
}

#[inline]
fn bit(n: usize, j: usize) -> u16 {
    1 << (n - 1 - j)
}

fn columns_of(mask: u16, n: usize) -> Vec<usize> {
    (0..n).filter(|&j| mask & bit(n, j) != 0).collect()
}

fn mask_of(cols: &[usize], n: usize) -> u16 {
    cols.iter().fold(0, |acc, &j| acc | bit(n, j))
}

/// Calls `visit(r1, r2, r3, c1, c2, all_ones)` for every placement of `Q`,
/// where `all_ones` masks the columns outside `{c1, c2}` on which the three
/// rows are all ones. Stops at the first `Some`.
fn scan_q_blocks<T>(
    m: &BinMatrix,
    mut visit: impl FnMut([usize; 3], [usize; 2], u16) -> Option<T>,
) -> Option<T> {
    let n = m.degree();
    for r1 in 0..n {
        for r2 in 0..n {
            if r2 == r1 {
                continue;
            }
            for r3 in 0..n {
                if r3 == r1 || r3 == r2 {
                    continue;
                }
                let (a, b, c) = (m.row(r1), m.row(r2), m.row(r3));
                for c1 in 0..n {
                    let b1 = bit(n, c1);
                    if a & b1 == 0 || b & b1 != 0 || c & b1 == 0 {
                        continue;
                    }
                    for c2 in 0..n {
                        let b2 = bit(n, c2);
                        if c2 == c1 || a & b2 != 0 || b & b2 == 0 || c & b2 == 0 {
                            continue;
                        }
                        let all_ones = a & b & c & !(b1 | b2);
                        if all_ones == 0 {
                            continue;
                        }
                        if let Some(hit) = visit([r1, r2, r3], [c1, c2], all_ones) {
                            return Some(hit);
                        }
                    }
                }
            }
        }
    }
    None
}

fn other_rows(m: &BinMatrix, rows: [usize; 3]) -> impl Iterator<Item = u16> + '_ {
    (0..m.degree())
        .filter(move |r| !rows.contains(r))
        .map(move |r| m.row(r))
}

fn cond_holds(m: &BinMatrix, rows: [usize; 3], q_mask: u16, j_mask: u16) -> bool {
    let rest = m.row_mask() & !(q_mask | j_mask);
    let x: Vec<u16> = rows.iter().map(|&r| m.row(r) & rest).collect();
    if x[0] & x[1] != 0 || x[0] & x[2] != 0 || x[1] & x[2] != 0 {
        return false;
    }
    other_rows(m, rows).all(|row| row & q_mask == 0 || row & j_mask == 0)
}

fn newcond_holds(m: &BinMatrix, rows: [usize; 3], q_mask: u16, j_pair: [u16; 2]) -> bool {
    let j_mask = j_pair[0] | j_pair[1];
    other_rows(m, rows).all(|row| {
        let y_overlap = row & j_pair[0] != 0 && row & j_pair[1] != 0;
        let xy_overlap = row & q_mask != 0 && row & j_mask != 0;
        !y_overlap && !xy_overlap
    })
}

fn find_cond(m: &BinMatrix, search: JSearch) -> Option<([usize; 3], [usize; 2], u16)> {
    let n = m.degree();
    scan_q_blocks(m, |rows, q, all_ones| {
        let q_mask = bit(n, q[0]) | bit(n, q[1]);
        match search {
            JSearch::Maximal => cond_holds(m, rows, q_mask, all_ones).then_some((rows, q, all_ones)),
            JSearch::Exhaustive => {
                // enumerate nonempty submasks of all_ones, largest first
                let mut sub = all_ones;
                while sub != 0 {
                    if cond_holds(m, rows, q_mask, sub) {
                        return Some((rows, q, sub));
                    }
                    sub = (sub - 1) & all_ones;
                }
                None
            }
        }
    })
}

fn find_newcond(m: &BinMatrix) -> Option<([usize; 3], [usize; 2], [usize; 2])> {
    let n = m.degree();
    scan_q_blocks(m, |rows, q, all_ones| {
        let q_mask = bit(n, q[0]) | bit(n, q[1]);
        let cols = columns_of(all_ones, n);
        for (i, &j1) in cols.iter().enumerate() {
            for &j2 in &cols[i + 1..] {
                if newcond_holds(m, rows, q_mask, [bit(n, j1), bit(n, j2)]) {
                    return Some((rows, q, [j1, j2]));
                }
            }
        }
        None
    })
}

/// First CondK embedding in `m`, then in `mᵀ`.
pub fn detect_cond(m: &BinMatrix) -> Option<BlockEmbedding> {
    detect_cond_with(m, JSearch::Maximal)
}

pub fn detect_cond_with(m: &BinMatrix, search: JSearch) -> Option<BlockEmbedding> {
    let n = m.degree();
    [false, true].into_iter().find_map(|transposed| {
        let target = if transposed { m.transpose() } else { *m };
        find_cond(&target, search).map(|(rows, q_cols, j_mask)| BlockEmbedding {
            kind: BlockKind::CondK,
            transposed,
            rows,
            q_cols,
            j_cols: columns_of(j_mask, n),
        })
    })
}

/// First NewCond embedding in `m`, then in `mᵀ`.
pub fn detect_newcond(m: &BinMatrix) -> Option<BlockEmbedding> {
    [false, true].into_iter().find_map(|transposed| {
        let target = if transposed { m.transpose() } else { *m };
        find_newcond(&target).map(|(rows, q_cols, j)| BlockEmbedding {
            kind: BlockKind::NewCond,
            transposed,
            rows,
            q_cols,
            j_cols: j.to_vec(),
        })
    })
}

/// First certificate from either detector, CondK first.
pub fn detect_any(m: &BinMatrix) -> Option<BlockEmbedding> {
    detect_cond(m).or_else(|| detect_newcond(m))
}

/// Re-checks every hypothesis of a claimed embedding against `m`.
pub fn verify_embedding(m: &BinMatrix, e: &BlockEmbedding) -> Result<bool> {
    let n = m.degree();
    for &idx in e.rows.iter().chain(&e.q_cols).chain(&e.j_cols) {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, degree: n });
        }
    }
    let target = if e.transposed { m.transpose() } else { *m };
    let [r1, r2, r3] = e.rows;
    let [c1, c2] = e.q_cols;
    let mut cols = e.q_cols.to_vec();
    cols.extend(&e.j_cols);
    cols.sort_unstable();
    cols.dedup();
    if r1 == r2 || r1 == r3 || r2 == r3 || cols.len() != 2 + e.j_cols.len() {
        return Ok(false);
    }
    let q_ok = target.get(r1, c1)
        && !target.get(r1, c2)
        && !target.get(r2, c1)
        && target.get(r2, c2)
        && target.get(r3, c1)
        && target.get(r3, c2);
    let j_ok = e
        .j_cols
        .iter()
        .all(|&j| e.rows.iter().all(|&r| target.get(r, j)));
    if !q_ok || !j_ok {
        return Ok(false);
    }
    let q_mask = bit(n, c1) | bit(n, c2);
    Ok(match e.kind {
        BlockKind::CondK => {
            !e.j_cols.is_empty() && cond_holds(&target, e.rows, q_mask, mask_of(&e.j_cols, n))
        }
        BlockKind::NewCond => {
            e.j_cols.len() == 2
                && newcond_holds(
                    &target,
                    e.rows,
                    q_mask,
                    [bit(n, e.j_cols[0]), bit(n, e.j_cols[1])],
                )
        }
    })
}

/// Minimum number of zeros of an SQ matrix carrying the given block.
///
/// CondK needs `n ≥ 6` and gives `3n − 6`; NewCond needs `n ≥ 5` and gives
/// `2n − 4`.
pub fn zero_lower_bound(kind: BlockKind, n: usize) -> Result<usize> {
    match kind {
        BlockKind::CondK if n >= 6 => Ok(3 * n - 6),
        BlockKind::NewCond if n >= 5 => Ok(2 * n - 4),
        _ => Err(Error::Unsupported(format!(
            "{kind:?} blocks do not occur in SQ matrices of degree {n}"
        ))),
    }
}
