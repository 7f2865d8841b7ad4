//! Simulation designs: sparse 0/1 precision matrices, a diagonal-shift
//! repair that makes them positive definite, and seeded Gaussian sampling.
//!
//! RNG: every stream is `ChaCha8Rng::seed_from_u64(seed)`. Random graphs
//! draw one uniform `f64` per pair `(i, j)`, `i < j`, in row-major order.
//! Gaussian draws fill an `n × p` matrix of standard normals row by row,
//! then each row `z` becomes `x = L⁻ᵀz` where `Ω = LLᵀ`, so that
//! `Cov(x) = Ω⁻¹`. For diagonal `Ω` this reduces to `zⱼ/√Ωⱼⱼ`.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{cholesky, symmetric_eigenvalues};
use crate::mat::Mat;
use crate::sketch::SYMMETRY_TOL;

/// Smallest eigenvalue guaranteed after [`pd_repair`].
pub const PD_FLOOR: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrecisionModel {
    /// Each off-diagonal pair is an edge with probability `x`.
    Random { x: f64 },
    /// Edges between all pairs with `|i − j| ≤ b`.
    Band { b: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionSpec {
    pub model: PrecisionModel,
    pub p: usize,
    /// Graph seed; zero for the deterministic band design.
    pub seed: u64,
    /// Diagonal shift applied by the repair, zero when none was needed.
    pub pd_shift: f64,
    /// Number of off-diagonal pairs set to one.
    pub edges: usize,
}

/// Number of pairs `i < j` with a nonzero entry.
pub fn edge_count(omega: &Mat) -> usize {
    let p = omega.rows();
    (0..p).map(|i| omega.row(i)[i + 1..].iter().filter(|v| **v != 0.0).count()).sum()
}

/// Random(x) precision matrix: unit diagonal, symmetric 0/1 off-diagonal,
/// then repaired.
pub fn precision_random(p: usize, x: f64, seed: u64) -> Result<(Mat, PrecisionSpec)> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("precision dimension p = {p} must be at least 2")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("edge probability {x} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut omega = Mat::identity(p);
    for i in 0..p {
        for j in i + 1..p {
            if rng.random::<f64>() < x {
                omega.set(i, j, 1.0);
                omega.set(j, i, 1.0);
            }
        }
    }
    let edges = edge_count(&omega);
    let (omega, pd_shift) = pd_repair(&omega)?;
    Ok((omega, PrecisionSpec { model: PrecisionModel::Random { x }, p, seed, pd_shift, edges }))
}

/// Band precision matrix with bandwidth `b`, then repaired.
/// Has exactly `b(2p − 1 − b)/2` edges.
pub fn precision_band(p: usize, b: usize) -> Result<(Mat, PrecisionSpec)> {
    if b == 0 || b >= p {
        return Err(Error::InvalidParameter(format!("bandwidth b = {b} must satisfy 1 <= b < p = {p}")));
    }
    let omega = Mat::from_fn(p, p, |i, j| if i.abs_diff(j) <= b { 1.0 } else { 0.0 });
    let edges = edge_count(&omega);
    let (omega, pd_shift) = pd_repair(&omega)?;
    Ok((omega, PrecisionSpec { model: PrecisionModel::Band { b }, p, seed: 0, pd_shift, edges }))
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(a: &Mat) -> Result<f64> {
    Ok(symmetric_eigenvalues(a)?.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Shifts `Ω` by `s·I` with `s = PD_FLOOR − λ_min(Ω)` when `λ_min < PD_FLOOR`.
/// Returns the (possibly unchanged) matrix and the shift.
///
/// Diagonally dominant inputs with margin at least `PD_FLOOR` skip the
/// eigensolve (Gershgorin).
pub fn pd_repair(omega: &Mat) -> Result<(Mat, f64)> {
    match omega.asymmetry() {
        None => return Err(Error::InvalidInput(format!("precision matrix is {}x{}, not square", omega.rows(), omega.cols()))),
        Some(a) if a > SYMMETRY_TOL => {
            return Err(Error::InvalidInput(format!("precision matrix is not symmetric (asymmetry {a:e})")))
        }
        _ => {}
    }
    if !omega.all_finite() {
        return Err(Error::InvalidInput("precision matrix has non-finite entries".into()));
    }
    let p = omega.rows();
    let gershgorin = (0..p)
        .map(|i| {
            let off: f64 = omega.row(i).iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.abs()).sum();
            omega.get(i, i) - off
        })
        .fold(f64::INFINITY, f64::min);
    if gershgorin >= PD_FLOOR {
        return Ok((omega.clone(), 0.0));
    }
    let lmin = min_eigenvalue(omega)?;
    if lmin >= PD_FLOOR {
        return Ok((omega.clone(), 0.0));
    }
    let s = PD_FLOOR - lmin;
    let mut out = omega.clone();
    for i in 0..p {
        out.set(i, i, out.get(i, i) + s);
    }
    Ok((out, s))
}

/// `n × p` matrix of independent standard normals, filled row-major.
pub fn standard_normal(n: usize, p: usize, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Mat::from_fn(n, p, |_, _| StandardNormal.sample(&mut rng))
}

fn is_diagonal(a: &Mat) -> bool {
    (0..a.rows()).all(|i| a.row(i).iter().enumerate().all(|(j, v)| i == j || *v == 0.0))
}

/// `n` i.i.d. rows from `N(0, Ω⁻¹)`.
pub fn sample_mvn(n: usize, omega: &Mat, seed: u64) -> Result<Mat> {
    let p = omega.rows();
    if omega.cols() != p || p == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n > 0 and a nonempty square precision, got n = {n} and {}x{}",
            omega.rows(),
            omega.cols()
        )));
    }
    if !omega.is_symmetric(SYMMETRY_TOL) {
        return Err(Error::InvalidInput("precision matrix is not symmetric".into()));
    }
    let z = standard_normal(n, p, seed);
    if is_diagonal(omega) {
        let mut scale = Vec::with_capacity(p);
        for i in 0..p {
            let w = omega.get(i, i);
            if w.is_nan() || w <= 0.0 {
                return Err(not_pd());
            }
            scale.push(1.0 / libm::sqrt(w));
        }
        return Ok(z.scale_columns(&scale));
    }
    let chol = cholesky(omega).ok_or_else(not_pd)?;
    // Rows x = L⁻ᵀz, i.e. X = Z·L⁻¹.
    Ok(chol.solve_right_lower(&z))
}

fn not_pd() -> Error {
    Error::Decomposition("precision matrix is not positive definite; apply pd_repair first".into())
}
