//! Complex unitaries with a prescribed zero pattern.
//!
//! Contains the scaled Fourier matrices, the Diţă block composition, support
//! extraction and a seeded alternating-projection search that looks for a
//! unitary whose support equals a given pattern.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forbidden::{detect_any, verify_embedding, BlockEmbedding};
use crate::matrix::{has_zero_line, BinMatrix};

/// Tolerance used when validating inputs to the Diţă composition.
pub const COMPOSE_TOL: f64 = 1e-9;
/// Pattern residual at which an iterate counts as converged.
pub const PATTERN_RESIDUAL_TARGET: f64 = 1e-12;
/// Smallest singular value below which a restart is abandoned.
pub const SINGULAR_FLOOR: f64 = 1e-13;

/// Dense square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() == 0 {
            return Err(Error::Shape(format!(
                "complex matrix must be square and nonempty, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape("complex matrix has non-finite entries".into()));
        }
        Ok(Self(data))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(DMatrix::from_fn(n, n, f))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Embeds a (0,1)-matrix with real unit entries.
    pub fn from_pattern(m: &BinMatrix) -> Self {
        let n = m.degree();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if m.get(i, j) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn degree(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.degree();
        let gram = self.0.adjoint() * &self.0;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexMatrixJson {
    degree: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.degree();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.0[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        ComplexMatrixJson { degree: n, entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ComplexMatrixJson::deserialize(deserializer)?;
        let n = raw.degree;
        if raw.entries.len() != n * n {
            return Err(serde::de::Error::custom(format!(
                "expected {} entries, found {}",
                n * n,
                raw.entries.len()
            )));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            let [re, im] = raw.entries[i * n + j];
            Complex64::new(re, im)
        }))
        .map_err(serde::de::Error::custom)
    }
}

/// `(1/√k)·F_k` with entries `exp(2πi·ab/k)/√k`.
pub fn fourier_matrix(k: usize) -> Result<ComplexMatrix> {
    if k == 0 {
        return Err(Error::Unsupported("Fourier matrix of degree 0".into()));
    }
    let scale = 1.0 / (k as f64).sqrt();
    ComplexMatrix::from_fn(k, |a, b| {
        // reduce the exponent mod k before scaling to keep the angle small
        let phase = std::f64::consts::TAU * ((a * b) % k) as f64 / k as f64;
        Complex64::from_polar(scale, phase)
    })
}

/// True iff every entry of `U†U − I` is smaller than `tol` in modulus.
pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
    u.unitarity_residual() < tol
}

/// Block matrix whose `(i, j)` block is `h[i][j]·blocks[j]`.
pub fn dita_compose(h: &ComplexMatrix, blocks: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let k = h.degree();
    if blocks.len() != k {
        return Err(Error::Shape(format!(
            "expected {k} blocks for a degree-{k} H, got {}",
            blocks.len()
        )));
    }
    let residual = h.unitarity_residual();
    if residual >= COMPOSE_TOL {
        return Err(Error::NotUnitary {
            argument: "H".into(),
            residual,
        });
    }
    let n = blocks[0].degree();
    for (idx, b) in blocks.iter().enumerate() {
        if b.degree() != n {
            return Err(Error::DegreeMismatch(b.degree(), n));
        }
        let residual = b.unitarity_residual();
        if residual >= COMPOSE_TOL {
            return Err(Error::NotUnitary {
                argument: format!("block {idx}"),
                residual,
            });
        }
    }
    ComplexMatrix::from_fn(n * k, |row, col| {
        let (bi, i) = (row / n, row % n);
        let (bj, j) = (col / n, col % n);
        h.get(bi, bj) * blocks[bj].get(i, j)
    })
}

/// Composes verified witnesses with `H = (1/√k)·F_k`.
///
/// The support of the result repeats the row of patterns `[M_1 … M_k]` in
/// every block row.
pub fn dita_row_compose(patterns: &[BinMatrix], witnesses: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if patterns.is_empty() || patterns.len() != witnesses.len() {
        return Err(Error::Shape(format!(
            "{} patterns for {} witnesses",
            patterns.len(),
            witnesses.len()
        )));
    }
    let defaults = WitnessBudget::default();
    for (idx, (p, w)) in patterns.iter().zip(witnesses).enumerate() {
        if !verify_witness(p, w, defaults.support_tol, defaults.unitary_tol)? {
            return Err(Error::Shape(format!(
                "witness {idx} does not realize pattern {idx}"
            )));
        }
    }
    dita_compose(&fourier_matrix(patterns.len())?, witnesses)
}

/// Pattern with a 1 wherever `|u_ij| > tol`. Fails only above degree 16.
pub fn support(u: &ComplexMatrix, tol: f64) -> Result<BinMatrix> {
    let n = u.degree();
    let mut m = BinMatrix::zeros(n)?;
    for i in 0..n {
        for j in 0..n {
            if u.get(i, j).norm() > tol {
                m.set(i, j, true);
            }
        }
    }
    Ok(m)
}

fn min_required_magnitude(m: &BinMatrix, u: &ComplexMatrix) -> f64 {
    let n = m.degree();
    let mut smallest = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            if m.get(i, j) {
                smallest = smallest.min(u.get(i, j).norm());
            }
        }
    }
    smallest
}

/// Unitary, support exactly `m`, and every required entry at least
/// `10·support_tol` in modulus.
pub fn verify_witness(m: &BinMatrix, u: &ComplexMatrix, support_tol: f64, unitary_tol: f64) -> Result<bool> {
    if m.degree() != u.degree() {
        return Err(Error::DegreeMismatch(m.degree(), u.degree()));
    }
    Ok(is_unitary(u, unitary_tol)
        && support(u, support_tol)? == *m
        && min_required_magnitude(m, u) >= 10.0 * support_tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessBudget {
    pub restarts: usize,
    pub iterations: usize,
    pub support_tol: f64,
    pub unitary_tol: f64,
    pub seed: u64,
}

impl Default for WitnessBudget {
    fn default() -> Self {
        Self {
            restarts: 200,
            iterations: 2000,
            support_tol: 1e-8,
            unitary_tol: 1e-9,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessStatus {
    Witness,
    CertifiedImpossible,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub status: WitnessStatus,
    pub witness: Option<ComplexMatrix>,
    pub certificate: Option<BlockEmbedding>,
    pub restarts_used: usize,
    /// Pattern residual of the returned witness, or the best one seen.
    pub final_residual: f64,
}

/// Nearest unitary in Frobenius norm, or `None` when `x` is close to singular.
pub fn polar_factor(x: &DMatrix<Complex64>) -> Option<DMatrix<Complex64>> {
    let svd = x.clone().svd(true, true);
    let smallest = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    // also rejects NaN from a degenerate decomposition
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(smallest >= SINGULAR_FLOOR) {
        return None;
    }
    let u = svd.u?;
    let v_t = svd.v_t?;
    Some(u * v_t)
}

fn mask_in_place(x: &mut DMatrix<Complex64>, m: &BinMatrix) -> f64 {
    let n = m.degree();
    let mut forbidden = 0.0;
    for i in 0..n {
        for j in 0..n {
            if !m.get(i, j) {
                forbidden += x[(i, j)].norm_sqr();
                x[(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    forbidden.sqrt()
}

/// Generator for restart `index`, independent of scheduling.
fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Gaussian complex matrix restricted to the pattern.
pub fn random_masked(m: &BinMatrix, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let n = m.degree();
    DMatrix::from_fn(n, n, |i, j| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        if m.get(i, j) {
            Complex64::new(re, im)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Haar-like random unitary of degree `n` (polar factor of a Gaussian matrix).
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let ones = BinMatrix::ones(n).expect("degree in range");
    loop {
        if let Some(u) = polar_factor(&random_masked(&ones, rng)) {
            return ComplexMatrix(u);
        }
    }
}

struct RestartOutcome {
    witness: Option<ComplexMatrix>,
    residual: f64,
}

fn run_restart(m: &BinMatrix, budget: &WitnessBudget, index: usize) -> RestartOutcome {
    let mut rng = restart_rng(budget.seed, index);
    let mut x = random_masked(m, &mut rng);
    let mut residual = f64::INFINITY;
    for _ in 0..budget.iterations {
        let Some(u) = polar_factor(&x) else {
            return RestartOutcome {
                witness: None,
                residual,
            };
        };
        x = u;
        residual = mask_in_place(&mut x, m);
        if residual < PATTERN_RESIDUAL_TARGET {
            break;
        }
    }
    // x is the masked last iterate: exact zeros off the pattern
    let witness = ComplexMatrix::new(x)
        .ok()
        .filter(|u| verify_witness(m, u, budget.support_tol, budget.unitary_tol).unwrap_or(false));
    RestartOutcome { witness, residual }
}

/// Searches for a unitary whose support is exactly `m`.
///
/// A forbidden block found by either detector short-circuits to
/// `CertifiedImpossible`. Otherwise restarts run in parallel batches and the
/// verified witness with the lowest restart index wins, so the outcome only
/// depends on `budget`.
pub fn find_witness(m: &BinMatrix, budget: &WitnessBudget) -> Result<WitnessResult> {
    if has_zero_line(m) {
        return Err(Error::ZeroLine);
    }
    if let Some(cert) = detect_any(m) {
        debug_assert!(verify_embedding(m, &cert).unwrap_or(false));
        return Ok(WitnessResult {
            status: WitnessStatus::CertifiedImpossible,
            witness: None,
            certificate: Some(cert),
            restarts_used: 0,
            final_residual: 0.0,
        });
    }
    search_witness(m, budget)
}

/// The numerical part of [`find_witness`], without the forbidden-block check.
///
/// Returns `Witness` or `Inconclusive`.
pub fn search_witness(m: &BinMatrix, budget: &WitnessBudget) -> Result<WitnessResult> {
    if has_zero_line(m) {
        return Err(Error::ZeroLine);
    }
    let batch = rayon::current_num_threads().max(1);
    let mut best_residual = f64::INFINITY;
    let mut start = 0;
    while start < budget.restarts {
        let end = (start + batch).min(budget.restarts);
        let outcomes: Vec<RestartOutcome> = (start..end)
            .into_par_iter()
            .map(|idx| run_restart(m, budget, idx))
            .collect();
        for (offset, outcome) in outcomes.into_iter().enumerate() {
            if let Some(w) = outcome.witness {
                return Ok(WitnessResult {
                    status: WitnessStatus::Witness,
                    witness: Some(w),
                    certificate: None,
                    restarts_used: start + offset + 1,
                    final_residual: outcome.residual,
                });
            }
            best_residual = best_residual.min(outcome.residual);
        }
        start = end;
    }
    Ok(WitnessResult {
        status: WitnessStatus::Inconclusive,
        witness: None,
        certificate: None,
        restarts_used: budget.restarts,
        final_residual: best_residual,
    })
}
