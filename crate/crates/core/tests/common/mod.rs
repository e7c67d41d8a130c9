//! Brute-force oracles, deliberately written without the library's search code.

#![allow(dead_code)]

use std::collections::HashSet;

use quadra_core::matrix::BinMatrix;

pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn to_grid(m: &BinMatrix) -> Vec<Vec<u8>> {
    let n = m.degree();
    (0..n)
        .map(|i| (0..n).map(|j| u8::from(m.get(i, j))).collect())
        .collect()
}

pub fn from_grid(g: &[Vec<u8>]) -> BinMatrix {
    let rows: Vec<String> = g
        .iter()
        .map(|r| r.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect())
        .collect();
    BinMatrix::from_row_strs(&rows).unwrap()
}

/// Matrix `k` in row-major bit order, bit 0 = entry (0,0).
pub fn matrix_from_index(n: usize, k: u64) -> BinMatrix {
    let g: Vec<Vec<u8>> = (0..n)
        .map(|i| (0..n).map(|j| ((k >> (i * n + j)) & 1) as u8).collect())
        .collect();
    from_grid(&g)
}

fn apply(g: &[Vec<u8>], p: &[usize], q: &[usize]) -> Vec<Vec<u8>> {
    let n = g.len();
    (0..n)
        .map(|i| (0..n).map(|j| g[p[i]][q[j]]).collect())
        .collect()
}

fn flat_string(g: &[Vec<u8>]) -> String {
    g.iter()
        .flat_map(|r| r.iter().map(|&b| if b == 1 { '1' } else { '0' }))
        .collect()
}

/// Least row-major string over every `(P, Q)`.
pub fn brute_canonical(m: &BinMatrix) -> BinMatrix {
    let g = to_grid(m);
    let perms = all_perms(m.degree());
    let mut best: Option<(String, Vec<Vec<u8>>)> = None;
    for p in &perms {
        for q in &perms {
            let h = apply(&g, p, q);
            let key = flat_string(&h);
            if best.as_ref().is_none_or(|(b, _)| key < *b) {
                best = Some((key, h));
            }
        }
    }
    from_grid(&best.unwrap().1)
}

pub fn brute_aut(m: &BinMatrix) -> u128 {
    let g = to_grid(m);
    let perms = all_perms(m.degree());
    let mut count = 0;
    for p in &perms {
        for q in &perms {
            if apply(&g, p, q) == g {
                count += 1;
            }
        }
    }
    count
}

pub fn orbit(m: &BinMatrix) -> HashSet<BinMatrix> {
    let perms = all_perms(m.degree());
    let mut out = HashSet::new();
    for p in &perms {
        for q in &perms {
            out.insert(m.permuted(p, q));
        }
    }
    out
}

pub fn brute_symmetric_equivalent(m: &BinMatrix) -> bool {
    let g = to_grid(m);
    let n = m.degree();
    let perms = all_perms(n);
    for p in &perms {
        for q in &perms {
            let h = apply(&g, p, q);
            if (0..n).all(|i| (0..n).all(|j| h[i][j] == h[j][i])) {
                return true;
            }
        }
    }
    false
}

/// No `|R| + |C| = n` split with `M[R, C]` all zero, `R` and `C` nonempty.
pub fn brute_indecomposable(m: &BinMatrix) -> bool {
    let n = m.degree();
    let g = to_grid(m);
    for rs in 1u32..(1 << n) {
        let r_size = rs.count_ones() as usize;
        if r_size >= n {
            continue;
        }
        for cs in 1u32..(1 << n) {
            if cs.count_ones() as usize + r_size != n {
                continue;
            }
            let zero = (0..n)
                .filter(|i| rs >> i & 1 == 1)
                .all(|i| (0..n).filter(|j| cs >> j & 1 == 1).all(|j| g[i][j] == 0));
            if zero {
                return false;
            }
        }
    }
    true
}

pub fn brute_row_sq(m: &BinMatrix) -> bool {
    let n = m.degree();
    let g = to_grid(m);
    let dot = |a: usize, b: usize| (0..n).map(|j| g[a][j] * g[b][j]).sum::<u8>();
    for s in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
        let linked = members
            .iter()
            .all(|&u| members.iter().any(|&v| v != u && dot(u, v) != 0));
        if !linked {
            continue;
        }
        let heavy = (0..n)
            .filter(|&j| members.iter().map(|&i| g[i][j]).sum::<u8>() >= 2)
            .count();
        if heavy < members.len() {
            return false;
        }
    }
    true
}

pub fn brute_sq(m: &BinMatrix) -> bool {
    brute_row_sq(m) && brute_row_sq(&m.transpose())
}

pub fn brute_has_zero_line(m: &BinMatrix) -> bool {
    let g = to_grid(m);
    let n = m.degree();
    (0..n).any(|i| g[i].iter().all(|&b| b == 0)) || (0..n).any(|j| (0..n).all(|i| g[i][j] == 0))
}

/// Number of raw degree-`n` matrices that are SQ without zero lines.
pub fn raw_sq_count(n: usize, keep: impl Fn(&BinMatrix) -> bool) -> u128 {
    let mut count = 0;
    for k in 0..(1u64 << (n * n)) {
        let m = matrix_from_index(n, k);
        if !brute_has_zero_line(&m) && brute_sq(&m) && keep(&m) {
            count += 1;
        }
    }
    count
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}
