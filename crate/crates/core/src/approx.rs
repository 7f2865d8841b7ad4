//! Nyström and column-sampling approximations.
//!
//! For a symmetric nonnegative-definite `A` and sketch with blocks `A₁₁`,
//! `L(A)`, the Nyström method approximates `A ≈ L A₁₁† Lᵀ` and its
//! eigenvectors by `√(l/q)·L·V(A₁₁)·Λ(A₁₁)†` with eigenvalues
//! `(q/l)·Λ(A₁₁)`. Column sampling takes the left singular vectors of `L`
//! with eigenvalues `√(q/l)·Λ(L)`.
//!
//! Applied to a data matrix `X` (`n × p`) these give seven subspace
//! estimators:
//!
//! | method      | target | sketch  | basis                                  |
//! |-------------|--------|---------|----------------------------------------|
//! | `v_nys`     | V      | columns | `√(l/p)·Xᵀ·U(x₁)·Λ(x₁)†`               |
//! | `v_cs`      | V      | columns | `U(n⁻¹Xᵀx₁)`                           |
//! | `u_nys`     | U      | rows    | `√(l/n)·X·V(X₁)·Λ(X₁)†`                |
//! | `u_cs`      | U      | rows    | `U(X·X₁ᵀ)`                             |
//! | `u_hat_nys` | U      | columns | `X·V_nys·Λ_nys^{†/2}`                  |
//! | `u_hat_cs`  | U      | columns | `X·V_cs·Λ_cs^{†/2}`                    |
//! | `u_hat`     | U      | columns | `U(x₁)`                                |
//!
//! `S = n⁻¹XᵀX` and `T = XXᵀ` are never formed. All bases are returned in
//! the original coordinate order, and the scale factors are always applied
//! (`scale_applied = true` where one exists); they do not change spans.
//!
//! `Λ^{†/2}` is the pseudoinverse of the entry-wise square root. Small
//! singular values are dropped by the [`svd`] rank rule before any
//! reciprocal is taken.
//!
//! A note on the perturbation form of `u_hat_nys`: with the scale factors
//! kept, `u_hat_nys = (l/p)·√n·[U(x₁) + x₂x₂ᵀU(x₁)Λ(x₁)^{†2}]`, and since
//! `Λ(S₁₁) = Λ(x₁)²/n` the bracket equals `U(x₁) + n⁻¹x₂x₂ᵀU(x₁)Λ(S₁₁)†`.
//! Writing the correction without the `n⁻¹` changes the span, so the tests
//! check the form above.

use alloc::format;
use alloc::vec::Vec;

use crate::basis::{Basis, Method, Route};
use crate::error::{Error, Result};
use crate::linalg::{pinv_diag, svd, ExactPca, Svd};
use crate::mat::Mat;
use crate::sketch::{extract_blocks, require_symmetric, Axis, Selection};

fn sketch_svd(m: &Mat, what: &str) -> Result<Svd> {
    let s = svd(m, None)?;
    if s.rank == 0 {
        return Err(Error::DegenerateSketch(format!("{what} is numerically zero")));
    }
    Ok(s)
}

fn reciprocals(s: &Svd) -> Result<Vec<f64>> {
    pinv_diag(&s.sigma, s.tol)
}

fn sqrt_ratio(a: usize, b: usize) -> f64 {
    libm::sqrt(a as f64 / b as f64)
}

/// `L(A)·A₁₁†·L(A)ᵀ` in the original index order.
pub fn nystrom_matrix(a: &Mat, sel: &Selection) -> Result<Mat> {
    require_symmetric(a)?;
    let blocks = extract_blocks(a, sel)?;
    let s = svd(&blocks.a11, None)?;
    if s.rank == 0 {
        return Ok(Mat::zeros(a.rows(), a.rows()));
    }
    let inv_sqrt: Vec<f64> = reciprocals(&s)?.iter().map(|v| libm::sqrt(*v)).collect();
    // Columns of A in selection order, rows in original order: this is L(A)
    // with the permutation already undone.
    let l = a.select_columns(sel.indices());
    let w = l.matmul(&s.v.scale_columns(&inv_sqrt));
    Ok(w.matmul_t(&w))
}

/// Nyström eigenvector/eigenvalue approximation of a symmetric nnd matrix.
///
/// The basis is `√(l/q)·L(A)·V(A₁₁)·Λ(A₁₁)†` with rows in original order,
/// eigenvalues `(q/l)·Λ(A₁₁)`. The method tag is `v_nys` for column sketches
/// (`A = S`) and `u_nys` for row sketches (`A = T`).
pub fn nystrom_eigpairs(a: &Mat, sel: &Selection) -> Result<Basis> {
    require_symmetric(a)?;
    let blocks = extract_blocks(a, sel)?;
    let s = sketch_svd(&blocks.a11, "principal block A11")?;
    let (q, l) = (sel.q(), sel.l());
    let inv = reciprocals(&s)?;
    let lmat = a.select_columns(sel.indices());
    let b = lmat.matmul(&s.v.scale_columns(&inv)).scale(sqrt_ratio(l, q));
    let ratio = q as f64 / l as f64;
    let method = match sel.axis() {
        Axis::Columns => Method::VNys,
        Axis::Rows => Method::UNys,
    };
    Ok(Basis {
        b,
        eigvals: Some(s.sigma.iter().map(|v| ratio * v).collect()),
        orthonormal: false,
        method,
        sel: Some(sel.clone()),
        scale_applied: true,
    })
}

/// Nyström approximation to `V` through the `l × l` block
/// `S₁₁ = n⁻¹x₁ᵀx₁` (storage `O(l²)`).
pub fn v_nys_space(x: &Mat, sel: &Selection) -> Result<Basis> {
    sel.expect_axis(Axis::Columns, x.cols())?;
    let (n, p) = x.shape();
    let l = sel.l();
    let x1 = x.select_columns(sel.indices());
    let s11 = x1.t_matmul(&x1).scale(1.0 / n as f64);
    let s = sketch_svd(&s11, "sampled Gram block S11")?;
    let inv = reciprocals(&s)?;
    // L(S) = n⁻¹Xᵀx₁, rows in original order.
    let ls = x.t_matmul(&x1).scale(1.0 / n as f64);
    let b = ls.matmul(&s.v.scale_columns(&inv)).scale(sqrt_ratio(l, p));
    let ratio = p as f64 / l as f64;
    Ok(Basis {
        b,
        eigvals: Some(s.sigma.iter().map(|v| ratio * v).collect()),
        orthonormal: false,
        method: Method::VNys,
        sel: Some(sel.clone()),
        scale_applied: true,
    })
}

/// Nyström approximation to `V` from the SVD of `x₁` (storage `O(nl)`).
pub fn v_nys_stable(x: &Mat, sel: &Selection) -> Result<Basis> {
    sel.expect_axis(Axis::Columns, x.cols())?;
    let (n, p) = x.shape();
    let l = sel.l();
    let x1 = x.select_columns(sel.indices());
    let s = sketch_svd(&x1, "sampled columns x1")?;
    let inv = reciprocals(&s)?;
    let b = x.t_matmul(&s.u.scale_columns(&inv)).scale(sqrt_ratio(l, p));
    let ratio = p as f64 / (l as f64 * n as f64);
    Ok(Basis {
        b,
        eigvals: Some(s.sigma.iter().map(|v| ratio * v * v).collect()),
        orthonormal: false,
        method: Method::VNys,
        sel: Some(sel.clone()),
        scale_applied: true,
    })
}

pub fn v_nys(x: &Mat, sel: &Selection, route: Route) -> Result<Basis> {
    match route {
        Route::Space => v_nys_space(x, sel),
        Route::Stable => v_nys_stable(x, sel),
    }
}

/// Column-sampling approximation to `V`: left singular vectors of
/// `L(S) = n⁻¹Xᵀx₁`, eigenvalues `√(p/l)·Λ(L(S))`.
pub fn v_cs(x: &Mat, sel: &Selection) -> Result<Basis> {
    sel.expect_axis(Axis::Columns, x.cols())?;
    let (n, p) = x.shape();
    let x1 = x.select_columns(sel.indices());
    let ls = x.t_matmul(&x1).scale(1.0 / n as f64);
    let s = sketch_svd(&ls, "L(S)")?;
    let f = sqrt_ratio(p, sel.l());
    Ok(Basis {
        eigvals: Some(s.sigma.iter().map(|v| f * v).collect()),
        b: s.u,
        orthonormal: true,
        method: Method::VCs,
        sel: Some(sel.clone()),
        scale_applied: true,
    })
}

/// Nyström approximation to `U` from a row sketch `X₁`:
/// `√(l/n)·X·V(X₁)·Λ(X₁)†`, eigenvalues `(n/l)·Λ(T₁₁) = (n/l)·Λ(X₁)²`.
///
/// Equivalent to [`nystrom_eigpairs`] on `T = XXᵀ` without forming `T`.
pub fn u_nys(x: &Mat, sel: &Selection) -> Result<Basis> {
    sel.expect_axis(Axis::Rows, x.rows())?;
    let n = x.rows();
    let l = sel.l();
    let x1 = x.select_rows(sel.indices());
    let s = sketch_svd(&x1, "sampled rows X1")?.with_left_convention();
    let inv = reciprocals(&s)?;
    let b = x.matmul(&s.v.scale_columns(&inv)).scale(sqrt_ratio(l, n));
    let ratio = n as f64 / l as f64;
    Ok(Basis {
        b,
        eigvals: Some(s.sigma.iter().map(|v| ratio * v * v).collect()),
        orthonormal: false,
        method: Method::UNys,
        sel: Some(sel.clone()),
        scale_applied: true,
    })
}

/// Column-sampling approximation to `U`: left singular vectors of
/// `L(T) = X·X₁ᵀ`, eigenvalues `√(n/l)·Λ(L(T))`.
pub fn u_cs(x: &Mat, sel: &Selection) -> Result<Basis> {
    sel.expect_axis(Axis::Rows, x.rows())?;
    let n = x.rows();
    let x1 = x.select_rows(sel.indices());
    let lt = x.matmul_t(&x1);
    let s = sketch_svd(&lt, "L(T)")?;
    let f = sqrt_ratio(n, sel.l());
    Ok(Basis {
        eigvals: Some(s.sigma.iter().map(|v| f * v).collect()),
        b: s.u,
        orthonormal: true,
        method: Method::UCs,
        sel: Some(sel.clone()),
        scale_applied: true,
    })
}

/// `X · B · Λ^{†/2}` for a `V` approximation with eigenvalues `Λ`.
fn plug_in(x: &Mat, v: Basis, method: Method) -> Result<Basis> {
    let eig = v.eigvals.clone().unwrap_or_default();
    let roots: Vec<f64> = eig.iter().map(|e| libm::sqrt(e.max(0.0))).collect();
    let w = pinv_diag(&roots, crate::linalg::default_tol_factor(x.rows(), x.cols()))?;
    if w.iter().all(|v| *v == 0.0) {
        return Err(Error::DegenerateSketch(format!("{method}: eigenvalue estimates vanish")));
    }
    Ok(Basis {
        b: x.matmul(&v.b.scale_columns(&w)),
        eigvals: Some(eig),
        orthonormal: false,
        method,
        sel: v.sel,
        scale_applied: true,
    })
}

/// `Û_nys = X·V_nys·Λ_nys^{†/2}`, with `V_nys` from the given route.
pub fn u_hat_nys_with(x: &Mat, sel: &Selection, route: Route) -> Result<Basis> {
    plug_in(x, v_nys(x, sel, route)?, Method::UHatNys)
}

pub fn u_hat_nys(x: &Mat, sel: &Selection) -> Result<Basis> {
    u_hat_nys_with(x, sel, Route::Stable)
}

/// `Û_cs = X·V_cs·Λ_cs^{†/2}`.
pub fn u_hat_cs(x: &Mat, sel: &Selection) -> Result<Basis> {
    plug_in(x, v_cs(x, sel)?, Method::UHatCs)
}

/// `Û = U(x₁)`, eigenvalues `Λ(x₁)²/n`.
pub fn u_hat(x: &Mat, sel: &Selection) -> Result<Basis> {
    sel.expect_axis(Axis::Columns, x.cols())?;
    let n = x.rows() as f64;
    let x1 = x.select_columns(sel.indices());
    let s = sketch_svd(&x1, "sampled columns x1")?;
    Ok(Basis {
        eigvals: Some(s.sigma.iter().map(|v| v * v / n).collect()),
        b: s.u,
        orthonormal: true,
        method: Method::UHat,
        sel: Some(sel.clone()),
        scale_applied: false,
    })
}

/// Dispatches on the method tag. `Exact` ignores the selection and returns
/// the full-rank exact basis for the method's target (`V`).
pub fn approximate(method: Method, x: &Mat, sel: &Selection, route: Route) -> Result<Basis> {
    match method {
        Method::Exact => {
            let pca = ExactPca::new(x)?;
            pca.v_basis(pca.rank())
        }
        Method::VNys => v_nys(x, sel, route),
        Method::VCs => v_cs(x, sel),
        Method::UNys => u_nys(x, sel),
        Method::UCs => u_cs(x, sel),
        Method::UHatNys => u_hat_nys_with(x, sel, route),
        Method::UHatCs => u_hat_cs(x, sel),
        Method::UHat => u_hat(x, sel),
    }
}
