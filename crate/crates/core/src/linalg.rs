//! Exact dense kernels: centering, the reduced SVD used as ground truth,
//! diagonal pseudoinversion and exact PCA.
//!
//! Rank truncation: a singular value counts as nonzero when it exceeds
//! `tol_factor · σ₁`, with `tol_factor` defaulting to
//! `max(rows, cols) · f64::EPSILON`.
//!
//! Sign convention: in every right singular vector the entry of largest
//! magnitude is nonnegative (ties go to the lowest index) and the paired left
//! vector is flipped with it. Symmetric nonnegative-definite matrices are
//! eigendecomposed through this same routine. For repeated singular values
//! the individual vectors are whatever the underlying Golub–Kahan iteration
//! returns; only their span is meaningful.

use alloc::format;
use alloc::vec::Vec;

use crate::basis::{Basis, Method};
use crate::error::{Error, Result};
use crate::mat::Mat;

/// Reduced singular value decomposition `A = U · diag(σ) · Vᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    /// `m × r` left singular vectors.
    pub u: Mat,
    /// Nonincreasing, all above `tol · σ₁`.
    pub sigma: Vec<f64>,
    /// `k × r` right singular vectors.
    pub v: Mat,
    pub rank: usize,
    /// Relative truncation threshold that was applied.
    pub tol: f64,
}

impl Svd {
    pub fn reconstruct(&self) -> Mat {
        self.u.scale_columns(&self.sigma).matmul_t(&self.v)
    }

    /// Re-signs the pairs so that the largest-magnitude entry of each *left*
    /// vector is nonnegative. This is the convention the right vectors of
    /// `A·Aᵀ` receive from [`svd`], which makes row-sketch estimators computed
    /// from `A` line up entry-for-entry with ones computed from `A·Aᵀ`.
    pub fn with_left_convention(mut self) -> Svd {
        for j in 0..self.rank {
            if needs_flip(&self.u, j) {
                flip_column(&mut self.u, j);
                flip_column(&mut self.v, j);
            }
        }
        self
    }
}

pub fn default_tol_factor(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

/// Reduced SVD with rank truncation at `tol_factor · σ₁`
/// (`None` selects [`default_tol_factor`]).
pub fn svd(a: &Mat, tol_factor: Option<f64>) -> Result<Svd> {
    let (m, k) = a.shape();
    if a.is_empty() {
        return Err(Error::InvalidInput(format!("svd of empty {m}x{k} matrix")));
    }
    if !a.all_finite() {
        return Err(Error::InvalidInput("svd input has non-finite entries".into()));
    }
    let tol = tol_factor.unwrap_or_else(|| default_tol_factor(m, k));
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance factor {tol} must be finite and >= 0")));
    }

    let dec = a
        .as_faer()
        .thin_svd()
        .map_err(|e| Error::Decomposition(format!("SVD did not converge: {e:?}")))?;
    let u_full = dec.U();
    let v_full = dec.V();
    let sv: Vec<f64> = dec.S().column_vector().iter().copied().collect();

    // Stable sort keeps equal singular values in the order the iteration
    // produced them, so repeated calls are bit-identical.
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[j].partial_cmp(&sv[i]).expect("finite singular values"));

    let top = sv[order[0]];
    let cutoff = tol * top;
    let kept: Vec<usize> = order.into_iter().take_while(|&i| top > 0.0 && sv[i] > cutoff).collect();
    let rank = kept.len();

    let mut u = Mat::from_fn(m, rank, |i, j| u_full[(i, kept[j])]);
    let mut v = Mat::from_fn(k, rank, |i, j| v_full[(i, kept[j])]);
    let sigma: Vec<f64> = kept.iter().map(|&i| sv[i]).collect();

    for j in 0..rank {
        if needs_flip(&v, j) {
            flip_column(&mut v, j);
            flip_column(&mut u, j);
        }
    }
    Ok(Svd { u, sigma, v, rank, tol })
}

fn needs_flip(m: &Mat, j: usize) -> bool {
    let mut best = 0.0_f64;
    let mut val = 0.0_f64;
    for i in 0..m.rows() {
        let x = m.get(i, j);
        if x.abs() > best {
            best = x.abs();
            val = x;
        }
    }
    val < 0.0
}

fn flip_column(m: &mut Mat, j: usize) {
    for i in 0..m.rows() {
        let x = m.get(i, j);
        m.set(i, j, -x);
    }
}

/// Entry-wise pseudoinverse of a nonincreasing, nonnegative diagonal:
/// `1/σᵢ` where `σᵢ > tol · σ₀`, zero elsewhere.
pub fn pinv_diag(sigma: &[f64], tol: f64) -> Result<Vec<f64>> {
    if let Some(bad) = sigma.iter().find(|s| !s.is_finite() || **s < 0.0) {
        return Err(Error::InvalidInput(format!("diagonal entry {bad} is not a finite nonnegative value")));
    }
    // The maximum equals σ₀ for sorted input and keeps the map an involution
    // on the retained entries.
    let top = sigma.iter().fold(0.0_f64, |m, &s| m.max(s));
    let cutoff = tol * top;
    Ok(sigma.iter().map(|&s| if s > cutoff && s > 0.0 { 1.0 / s } else { 0.0 }).collect())
}

/// `X̃ − n⁻¹·1·1ᵀ·X̃`
pub fn center_columns(x: &Mat) -> Mat {
    let (n, p) = x.shape();
    if n == 0 {
        return x.clone();
    }
    let mut means = alloc::vec![0.0; p];
    for i in 0..n {
        for (m, v) in means.iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    means.iter_mut().for_each(|m| *m /= n as f64);
    let mut out = x.clone();
    for i in 0..n {
        for (v, m) in out.row_mut(i).iter_mut().zip(&means) {
            *v -= m;
        }
    }
    out
}

/// Lower Cholesky factor `L` of a symmetric positive-definite matrix, or
/// `None` when a pivot is not positive.
pub(crate) fn cholesky(a: &Mat) -> Option<Cholesky> {
    a.as_faer().llt(faer::Side::Lower).ok().map(Cholesky)
}

pub(crate) struct Cholesky(faer::linalg::solvers::Llt<f64>);

impl Cholesky {
    #[allow(dead_code)]
    pub(crate) fn l(&self) -> Mat {
        Mat::from_faer(self.0.L())
    }

    /// `A⁻¹·B`.
    pub(crate) fn solve(&self, b: &Mat) -> Mat {
        use faer::linalg::solvers::Solve;
        Mat::from_faer(self.0.solve(b.as_faer()).as_ref())
    }

    pub(crate) fn inverse(&self) -> Mat {
        use faer::linalg::solvers::DenseSolveCore;
        Mat::from_faer(self.0.inverse().as_ref())
    }

    /// `X` with `X·L = B`, i.e. `X = B·L⁻¹`.
    pub(crate) fn solve_right_lower(&self, b: &Mat) -> Mat {
        // Transposed: Lᵀ·Xᵀ = Bᵀ, an upper-triangular system.
        let mut xt = faer::Mat::from_fn(b.cols(), b.rows(), |i, j| b.get(j, i));
        faer::linalg::triangular_solve::solve_upper_triangular_in_place(
            self.0.L().transpose(),
            xt.as_mut(),
            faer::Par::Seq,
        );
        Mat::from_faer(xt.as_ref().transpose())
    }
}

/// Eigenvalues of a symmetric matrix in nondecreasing order.
pub fn symmetric_eigenvalues(a: &Mat) -> Result<Vec<f64>> {
    a.as_faer()
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::Decomposition(format!("symmetric eigensolver failed: {e:?}")))
}

/// Dense exact PCA of a data matrix, computed once and truncated on demand.
#[derive(Debug, Clone)]
pub struct ExactPca {
    pub svd: Svd,
    pub n: usize,
}

impl ExactPca {
    pub fn new(x: &Mat) -> Result<Self> {
        Ok(Self { svd: svd(x, None)?, n: x.rows() })
    }

    pub fn rank(&self) -> usize {
        self.svd.rank
    }

    /// Eigenvalues `λᵢ(X)²/n` of `S = n⁻¹XᵀX`.
    pub fn eigvals(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.svd.sigma.iter().map(|s| s * s / n).collect()
    }

    fn check(&self, d: usize) -> Result<()> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        if d > self.svd.rank {
            return Err(Error::Rank { requested: d, rank: self.svd.rank });
        }
        Ok(())
    }

    /// Leading `d` right singular vectors.
    pub fn v_basis(&self, d: usize) -> Result<Basis> {
        self.check(d)?;
        Ok(Basis {
            b: self.svd.v.leading_columns(d),
            eigvals: Some(self.eigvals()[..d].to_vec()),
            orthonormal: true,
            method: Method::Exact,
            sel: None,
            scale_applied: false,
        })
    }

    /// Leading `d` left singular vectors.
    pub fn u_basis(&self, d: usize) -> Result<Basis> {
        self.check(d)?;
        Ok(Basis {
            b: self.svd.u.leading_columns(d),
            eigvals: Some(self.eigvals()[..d].to_vec()),
            orthonormal: true,
            method: Method::Exact,
            sel: None,
            scale_applied: false,
        })
    }
}

/// Leading `d` eigenvectors of `n⁻¹XᵀX` for `X` as given (center first if
/// PCA of centered data is wanted).
pub fn exact_pca(x: &Mat, d: usize) -> Result<Basis> {
    ExactPca::new(x)?.v_basis(d)
}
