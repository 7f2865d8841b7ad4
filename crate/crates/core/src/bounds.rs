//! Spectral gaps, coherence, and the upper bounds on `Δ(V_d, V_nys,d)` and
//! `Δ(V_d, V_cs,d)`.
//!
//! Index sums follow the sketch permutation: the selected columns form
//! `x₁`, the rest `x₂`. The tail sum runs over all pairs of `x₂` columns,
//! diagonal included. The inverse in the Nyström second term is never
//! formed; with `G = Ω_dᵀΩ_d` (`d × d`) the push-through identity gives
//! `tr(Ω_dᵀ(I + Ω_dΩ_dᵀ)⁻¹Ω_d) = tr(G(I + G)⁻¹)`, evaluated with a Cholesky
//! solve.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::basis::{Basis, Method};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, pinv_diag, svd, Svd};
use crate::mat::Mat;
use crate::sketch::{remaining_columns, Axis, Selection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    NystromThm1,
    CsThm2,
    NystromCor,
    CsCor,
}

impl BoundKind {
    pub fn tag(self) -> &'static str {
        match self {
            BoundKind::NystromThm1 => "nystrom_thm1",
            BoundKind::CsThm2 => "cs_thm2",
            BoundKind::NystromCor => "nystrom_cor",
            BoundKind::CsCor => "cs_cor",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// `ε` for the Nyström theorem, `δ` otherwise.
    pub gap: f64,
    pub term1: f64,
    pub term2: f64,
    pub total: f64,
    pub d: usize,
    pub l: usize,
    pub coherence: Option<f64>,
    /// Set when the radicand of the orthogonality term was negative and
    /// clamped to zero.
    pub clamped: bool,
}

impl BoundReport {
    fn new(kind: BoundKind, gap: f64, term1: f64, term2: f64, d: usize, l: usize) -> Self {
        BoundReport { kind, gap, term1, term2, total: term1 + term2, d, l, coherence: None, clamped: false }
    }
}

/// `λ_d(top) − λ_{d+1}(bottom)`, 1-indexed; missing trailing entries of
/// `bottom` count as zero.
pub fn spectral_gap(top: &[f64], bottom: &[f64], d: usize) -> Result<f64> {
    if d == 0 || d > top.len() {
        return Err(Error::InvalidParameter(format!(
            "d = {d} outside 1..={} for the spectral gap",
            top.len()
        )));
    }
    Ok(top[d - 1] - bottom.get(d).copied().unwrap_or(0.0))
}

fn check_gap(gap: f64, d: usize) -> Result<()> {
    if gap > 0.0 && gap.is_finite() {
        Ok(())
    } else {
        Err(Error::Gap { gap, d })
    }
}

fn sum_sq(m: &Mat) -> f64 {
    m.data().iter().map(|v| v * v).sum()
}

const TAIL_BLOCK: usize = 256;

/// `(S_mixed, S_tail)`: sums of squared inner products between unselected
/// and selected columns, and among unselected columns.
pub fn cross_term_sums(x: &Mat, sel: &Selection) -> Result<(f64, f64)> {
    sel.expect_axis(Axis::Columns, x.cols())?;
    if sel.l() == x.cols() {
        return Ok((0.0, 0.0));
    }
    let x1 = x.select_columns(sel.indices());
    let x2 = remaining_columns(x, sel);
    let mixed = sum_sq(&x2.t_matmul(&x1));
    let m = x2.cols();
    let mut tail = 0.0;
    let mut start = 0;
    while start < m {
        let end = (start + TAIL_BLOCK).min(m);
        let idx: Vec<usize> = (start..end).collect();
        tail += sum_sq(&x2.t_matmul(&x2.select_columns(&idx)));
        start = end;
    }
    Ok((mixed, tail))
}

/// Spectra shared by the two theorem bounds.
#[derive(Debug, Clone)]
pub struct SketchSpectra {
    /// Eigenvalues of `S = n⁻¹XᵀX`.
    pub eig_s: Vec<f64>,
    /// Eigenvalues of `S₁₁ = n⁻¹x₁ᵀx₁`.
    pub eig_s11: Vec<f64>,
    /// Singular values of `L(S) = n⁻¹Xᵀx₁`.
    pub sv_ls: Vec<f64>,
    x1_svd: Svd,
}

impl SketchSpectra {
    pub fn new(x: &Mat, sel: &Selection) -> Result<Self> {
        let full = svd(x, None)?;
        let n = x.rows() as f64;
        Self::with_eig_s(x, sel, full.sigma.iter().map(|s| s * s / n).collect())
    }

    /// Reuses eigenvalues of `S` computed elsewhere.
    pub fn with_eig_s(x: &Mat, sel: &Selection, eig_s: Vec<f64>) -> Result<Self> {
        sel.expect_axis(Axis::Columns, x.cols())?;
        let n = x.rows() as f64;
        let x1 = x.select_columns(sel.indices());
        let x1_svd = svd(&x1, None)?;
        if x1_svd.rank == 0 {
            return Err(Error::DegenerateSketch("sampled columns x1 are numerically zero".into()));
        }
        let eig_s11 = x1_svd.sigma.iter().map(|s| s * s / n).collect();
        let ls = x.t_matmul(&x1).scale(1.0 / n);
        let sv_ls = svd(&ls, None)?.sigma;
        Ok(SketchSpectra { eig_s, eig_s11, sv_ls, x1_svd })
    }

    /// `ε = λ_d(S) − λ_{d+1}(S₁₁)`.
    pub fn nystrom_gap(&self, d: usize) -> Result<f64> {
        spectral_gap(&self.eig_s, &self.eig_s11, d)
    }

    /// `δ = λ_d(S) − λ_{d+1}(L(S))`.
    pub fn cs_gap(&self, d: usize) -> Result<f64> {
        spectral_gap(&self.eig_s, &self.sv_ls, d)
    }
}

/// `Ω = S₂₁·V(S₁₁)·Λ(S₁₁)† = x₂ᵀ·U(x₁)·Λ(x₁)†`, `(p − l) × rank(x₁)`.
fn omega(x: &Mat, sel: &Selection, x1_svd: &Svd) -> Result<Mat> {
    let inv = pinv_diag(&x1_svd.sigma, x1_svd.tol)?;
    let x2 = remaining_columns(x, sel);
    Ok(x2.t_matmul(&x1_svd.u.scale_columns(&inv)))
}

/// `tr(G(I + G)⁻¹)` for symmetric nonnegative-definite `G`.
fn push_through_trace(g: &Mat) -> Result<f64> {
    let k = g.rows();
    let a = g.add(&Mat::identity(k));
    let chol = cholesky(&a).ok_or_else(|| Error::Decomposition("I + ΩᵀΩ is not positive definite".into()))?;
    Ok(chol.solve(g).trace())
}

/// Nyström theorem bound, computing all spectra.
pub fn nystrom_bound(x: &Mat, sel: &Selection, d: usize) -> Result<BoundReport> {
    nystrom_bound_with(x, sel, d, &SketchSpectra::new(x, sel)?)
}

pub fn nystrom_bound_with(x: &Mat, sel: &Selection, d: usize, spectra: &SketchSpectra) -> Result<BoundReport> {
    let l = sel.l();
    if d > l {
        return Err(Error::InvalidParameter(format!("d = {d} exceeds sketch size l = {l}")));
    }
    let eps = spectra.nystrom_gap(d)?;
    check_gap(eps, d)?;
    let n = x.rows() as f64;
    let (mixed, tail) = cross_term_sums(x, sel)?;
    let term1 = core::f64::consts::SQRT_2 / (n * eps) * libm::sqrt(2.0 * mixed + tail);
    let term2 = if l == x.cols() {
        0.0
    } else {
        let om = omega(x, sel, &spectra.x1_svd)?;
        let k = d.min(om.cols());
        let od = om.leading_columns(k);
        let tr = push_through_trace(&od.t_matmul(&od))?;
        core::f64::consts::SQRT_2 * libm::sqrt(tr.max(0.0))
    };
    Ok(BoundReport::new(BoundKind::NystromThm1, eps, term1, term2, d, l))
}

/// Column-sampling theorem bound, computing all spectra.
pub fn cs_bound(x: &Mat, sel: &Selection, d: usize) -> Result<BoundReport> {
    cs_bound_with(x, sel, d, &SketchSpectra::new(x, sel)?)
}

pub fn cs_bound_with(x: &Mat, sel: &Selection, d: usize, spectra: &SketchSpectra) -> Result<BoundReport> {
    let delta = spectra.cs_gap(d)?;
    check_gap(delta, d)?;
    let n = x.rows() as f64;
    let (mixed, tail) = cross_term_sums(x, sel)?;
    let term1 = libm::sqrt(mixed + tail) / (delta * n);
    Ok(BoundReport::new(BoundKind::CsThm2, delta, term1, 0.0, d, sel.l()))
}

/// Largest signed inner product `x_jᵀx_k` over `j ≠ k` with `k` among the
/// last `p − r` columns (0-indexed `k ≥ r`).
pub fn coherence(x: &Mat, r: usize) -> Result<f64> {
    let p = x.cols();
    if r >= p {
        return Err(Error::InvalidParameter(format!("coherence needs r < p, got r = {r}, p = {p}")));
    }
    if p < 2 {
        return Err(Error::InvalidParameter("coherence needs at least two columns".into()));
    }
    let idx: Vec<usize> = (r..p).collect();
    let g = x.t_matmul(&x.select_columns(&idx));
    let mut best = f64::NEG_INFINITY;
    for j in 0..p {
        for (c, &k) in idx.iter().enumerate() {
            if j != k {
                best = best.max(g.get(j, c));
            }
        }
    }
    Ok(best)
}

/// Coherence of the sketch-permuted matrix `[x₁ x₂]` with `r = l`. With a
/// full selection the index set is empty and the value is zero.
pub fn sketch_coherence(x: &Mat, sel: &Selection) -> Result<f64> {
    sel.expect_axis(Axis::Columns, x.cols())?;
    if sel.l() == x.cols() {
        return Ok(0.0);
    }
    coherence(&x.select_columns(&sel.permutation()), sel.l())
}

/// Removes the `√(l/p)` factor from a scaled Nyström `V` basis and keeps
/// `d` columns. Unscaled, the basis is a row permutation of `[V(S₁₁); Ω]`,
/// whose Gram matrix is `I + ΩᵀΩ`.
pub fn corollary_input(basis: &Basis, d: usize) -> Result<Mat> {
    if basis.method != Method::VNys {
        return Err(Error::InvalidParameter(format!("corollary input must be v_nys, got {}", basis.method)));
    }
    let sel = basis
        .sel
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("v_nys basis carries no selection".into()))?;
    let t = basis.truncate(d)?;
    if basis.scale_applied {
        Ok(t.b.scale(libm::sqrt(sel.q() as f64 / sel.l() as f64)))
    } else {
        Ok(t.b)
    }
}

/// Corollary bounds `(nystrom, cs)` from a coherence value `c`.
///
/// A negative `c` contributes zero. The Nyström orthogonality term is
/// `√(d − tr((VᵀV)⁻¹))`; a negative radicand is clamped and flagged.
pub fn corollary_bounds(
    c: f64,
    p: usize,
    l: usize,
    n: usize,
    delta: f64,
    v_nys_d: &Mat,
    d: usize,
) -> Result<(BoundReport, BoundReport)> {
    if l == 0 || l > p || n == 0 {
        return Err(Error::InvalidParameter(format!("need 0 < l <= p and n > 0, got l = {l}, p = {p}, n = {n}")));
    }
    if v_nys_d.cols() != d {
        return Err(Error::InvalidParameter(format!(
            "v_nys_d has {} columns, expected d = {d}",
            v_nys_d.cols()
        )));
    }
    check_gap(delta, d)?;
    let (pf, lf, nf) = (p as f64, l as f64, n as f64);
    let cc = c.max(0.0);

    let gram = v_nys_d.t_matmul(v_nys_d);
    let chol = cholesky(&gram).ok_or(Error::Rank { requested: d, rank: d.saturating_sub(1) })?;
    let tr_inv = chol.inverse().trace();
    let radicand = d as f64 - tr_inv;
    let clamped = radicand < 0.0;

    let mut nys = BoundReport::new(
        BoundKind::NystromCor,
        delta,
        cc * libm::sqrt(pf * pf - lf * lf) / (nf * delta),
        libm::sqrt(radicand.max(0.0)),
        d,
        l,
    );
    nys.coherence = Some(c);
    nys.clamped = clamped;
    let mut cs = BoundReport::new(BoundKind::CsCor, delta, cc * libm::sqrt((pf - lf) * pf) / (nf * delta), 0.0, d, l);
    cs.coherence = Some(c);
    Ok((nys, cs))
}

/// `√(p² − l²) − √((p − l)p)`, evaluated as `l√(p − l)/(√(p + l) + √p)`
/// to avoid cancellation for `l ≪ p`.
pub fn bound_difference(p: usize, l: usize) -> Result<f64> {
    if l == 0 || l > p {
        return Err(Error::InvalidParameter(format!("need 0 < l <= p, got l = {l}, p = {p}")));
    }
    let (pf, lf) = (p as f64, l as f64);
    Ok(lf * libm::sqrt(pf - lf) / (libm::sqrt(pf + lf) + libm::sqrt(pf)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::{v_cs, v_nys};
    use crate::basis::Route;
    use crate::linalg::ExactPca;
    use crate::sketch::sample_uniform;
    use crate::subspace::delta_of;
    use crate::testutil::{gaussian, orthonormalize};

    fn cols(q: usize, idx: &[usize]) -> Selection {
        Selection::from_indices(idx.to_vec(), q, Axis::Columns).unwrap()
    }

    #[test]
    fn gap_examples() {
        assert_eq!(spectral_gap(&[5.0, 3.0, 1.0], &[4.0, 2.0, 0.5], 2).unwrap(), 2.5);
        assert_eq!(spectral_gap(&[5.0, 3.0, 1.0], &[4.0, 2.0], 2).unwrap(), 3.0);
        assert!(matches!(spectral_gap(&[1.0], &[], 2), Err(Error::InvalidParameter(_))));
        let eig = [2.0, 1.0, 1.0];
        assert_eq!(spectral_gap(&eig, &eig, 2).unwrap(), 0.0);
    }

    #[test]
    fn zero_gap_is_an_error_downstream() {
        // S = diag(1,1,1,…): every gap vanishes.
        let x = Mat::from_fn(6, 3, |i, j| if i == j { 1.0 } else { 0.0 });
        let sel = cols(3, &[0, 1]);
        assert!(matches!(nystrom_bound(&x, &sel, 1), Err(Error::Gap { .. })));
        assert!(matches!(cs_bound(&x, &sel, 1), Err(Error::Gap { .. })));
    }

    fn brute_sums(x: &Mat, sel: &Selection) -> (f64, f64) {
        let rest = sel.complement();
        let dot = |a: usize, b: usize| -> f64 { (0..x.rows()).map(|i| x.get(i, a) * x.get(i, b)).sum() };
        let mut mixed = 0.0;
        let mut tail = 0.0;
        for &j in &rest {
            for &k in sel.indices() {
                mixed += dot(j, k).powi(2);
            }
            for &k in &rest {
                tail += dot(j, k).powi(2);
            }
        }
        (mixed, tail)
    }

    #[test]
    fn cross_sums() {
        let x = Mat::from_fn(5, 4, |i, j| if i == j { (j + 1) as f64 } else { 0.0 });
        let (m, t) = cross_term_sums(&x, &cols(4, &[0, 2])).unwrap();
        assert_eq!(m, 0.0);
        assert_eq!(t, 16.0 + 256.0);
        assert_eq!(cross_term_sums(&x, &Selection::all(4, Axis::Columns)).unwrap(), (0.0, 0.0));

        let x = gaussian(10, 6, 5);
        let sel = sample_uniform(6, 3, 2, Axis::Columns).unwrap();
        let (m, t) = cross_term_sums(&x, &sel).unwrap();
        let (bm, bt) = brute_sums(&x, &sel);
        assert!((m - bm).abs() <= 1e-10 * bm);
        assert!((t - bt).abs() <= 1e-10 * bt);
    }

    #[test]
    fn cross_sums_many_tail_blocks() {
        let x = gaussian(4, 600, 1);
        let sel = sample_uniform(600, 5, 3, Axis::Columns).unwrap();
        let (m, t) = cross_term_sums(&x, &sel).unwrap();
        let (bm, bt) = brute_sums(&x, &sel);
        assert!((m - bm).abs() <= 1e-10 * bm);
        assert!((t - bt).abs() <= 1e-10 * bt);
    }

    #[test]
    fn decoupled_case_has_zero_second_term() {
        // Columns 0,1 carry the top of the spectrum and are orthogonal to the rest.
        let mut x = Mat::zeros(8, 5);
        let top = gaussian(3, 2, 4).scale(5.0);
        let low = gaussian(5, 3, 5).scale(0.3);
        for i in 0..3 {
            for j in 0..2 {
                x.set(i, j, top.get(i, j));
            }
        }
        for i in 0..5 {
            for j in 0..3 {
                x.set(3 + i, 2 + j, low.get(i, j));
            }
        }
        let sel = cols(5, &[0, 1]);
        let rep = nystrom_bound(&x, &sel, 2).unwrap();
        assert!(rep.term2.abs() < 1e-12);
        let exact = ExactPca::new(&x).unwrap().v_basis(2).unwrap();
        let b = v_nys(&x, &sel, Route::Stable).unwrap();
        let dv = delta_of(&exact.b, &b.b, 2).unwrap();
        assert!(dv < 1e-10 && dv <= rep.total);
        let cs = cs_bound(&x, &sel, 2).unwrap();
        assert!(delta_of(&exact.b, &v_cs(&x, &sel).unwrap().b, 2).unwrap() <= cs.total);
    }

    #[test]
    fn full_selection_has_zero_first_term() {
        let x = gaussian(12, 5, 3);
        let rep = nystrom_bound(&x, &Selection::all(5, Axis::Columns), 2).unwrap();
        assert_eq!(rep.term1, 0.0);
        assert_eq!(rep.term2, 0.0);
    }

    #[test]
    fn theorem_bounds_dominate_measured_distance() {
        let (n, p, l, d) = (60, 40, 20, 2);
        let mut checked = 0;
        let mut seed = 0;
        while checked < 100 {
            seed += 1;
            let x = gaussian(n, p, 5000 + seed);
            let sel = sample_uniform(p, l, seed, Axis::Columns).unwrap();
            let spectra = SketchSpectra::new(&x, &sel).unwrap();
            if spectra.nystrom_gap(d).unwrap() < 0.05 || spectra.cs_gap(d).unwrap() <= 0.0 {
                continue;
            }
            checked += 1;
            let exact = ExactPca::new(&x).unwrap().v_basis(d).unwrap();
            let nys = nystrom_bound_with(&x, &sel, d, &spectra).unwrap();
            let cs = cs_bound_with(&x, &sel, d, &spectra).unwrap();
            let dn = delta_of(&exact.b, &v_nys(&x, &sel, Route::Stable).unwrap().b, d).unwrap();
            let dc = delta_of(&exact.b, &v_cs(&x, &sel).unwrap().b, d).unwrap();
            assert!(dn <= nys.total + 1e-8, "seed {seed}: {dn} > {}", nys.total);
            assert!(dc <= cs.total + 1e-8, "seed {seed}: {dc} > {}", cs.total);
        }
    }

    #[test]
    fn nystrom_and_cs_first_terms_differ_structurally() {
        let x = gaussian(30, 12, 9);
        let sel = sample_uniform(12, 6, 1, Axis::Columns).unwrap();
        let spectra = SketchSpectra::new(&x, &sel).unwrap();
        let nys = nystrom_bound_with(&x, &sel, 1, &spectra).unwrap();
        let cs = cs_bound_with(&x, &sel, 1, &spectra).unwrap();
        let (m, t) = cross_term_sums(&x, &sel).unwrap();
        let ratio = (nys.term1 * nys.gap) / (cs.term1 * cs.gap);
        let expected = 2f64.sqrt() * ((2.0 * m + t) / (m + t)).sqrt();
        assert!((ratio - expected).abs() < 1e-12);
        assert_eq!(cs.term2, 0.0);
        for r in [&nys, &cs] {
            assert!((r.total - r.term1 - r.term2).abs() <= 1e-12);
        }
    }

    #[test]
    fn second_term_matches_explicit_inverse() {
        let x = gaussian(20, 10, 2);
        let sel = sample_uniform(10, 4, 7, Axis::Columns).unwrap();
        let spectra = SketchSpectra::new(&x, &sel).unwrap();
        let om = omega(&x, &sel, &spectra.x1_svd).unwrap().leading_columns(2);
        let m = om.matmul_t(&om);
        let inv = cholesky(&m.add(&Mat::identity(m.rows()))).unwrap().inverse();
        let tr = om.t_matmul(&inv.matmul(&om)).trace();
        assert!((push_through_trace(&om.t_matmul(&om)).unwrap() - tr).abs() < 1e-12 * tr.max(1.0));
    }

    #[test]
    fn gap_inequality() {
        for seed in 0..30 {
            let x = gaussian(25, 15, seed);
            let sel = sample_uniform(15, 6, seed, Axis::Columns).unwrap();
            let s = SketchSpectra::new(&x, &sel).unwrap();
            for d in 0..s.eig_s11.len() {
                assert!(s.sv_ls[d] >= s.eig_s11[d] - 1e-10);
            }
        }
    }

    fn brute_coherence(x: &Mat, r: usize) -> f64 {
        let p = x.cols();
        let mut best = f64::NEG_INFINITY;
        for j in 0..p {
            for k in r..p {
                if j != k {
                    let v: f64 = (0..x.rows()).map(|i| x.get(i, j) * x.get(i, k)).sum();
                    best = best.max(v);
                }
            }
        }
        best
    }

    #[test]
    fn coherence_examples() {
        let q = orthonormalize(&gaussian(6, 4, 1));
        assert!(coherence(&q, 1).unwrap().abs() < 1e-12);
        let mut x = gaussian(7, 5, 2);
        for i in 0..7 {
            let v = x.get(i, 0);
            x.set(i, 4, v);
        }
        let n1: f64 = x.column(0).iter().map(|v| v * v).sum();
        assert!(coherence(&x, 2).unwrap() >= n1 - 1e-12);
        let x = gaussian(8, 5, 3);
        let a = coherence(&x, 2).unwrap();
        let b = brute_coherence(&x, 2);
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        assert!(matches!(coherence(&x, 5), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn corollary_arithmetic() {
        let v = orthonormalize(&gaussian(5, 2, 1));
        let (nys, cs) = corollary_bounds(1.0, 5, 3, 10, 0.5, &v, 2).unwrap();
        assert!((cs.total - 10f64.sqrt() / 5.0).abs() < 1e-12);
        assert!((nys.term1 - 0.8).abs() < 1e-12);
        assert!(nys.term2.abs() < 1e-7);
        let (nys, cs) = corollary_bounds(1.0, 5, 5, 10, 0.5, &v, 2).unwrap();
        assert_eq!((nys.term1, cs.term1), (0.0, 0.0));
        assert!(matches!(corollary_bounds(1.0, 5, 3, 10, 0.0, &v, 2), Err(Error::Gap { .. })));
    }

    #[test]
    fn corollary_clamps_short_vectors() {
        // Columns shorter than unit length push tr((VᵀV)⁻¹) above d.
        let v = Mat::from_rows(&[&[0.5, 0.0], &[0.0, 0.5], &[0.0, 0.0]]);
        let (nys, _) = corollary_bounds(0.1, 4, 2, 10, 1.0, &v, 2).unwrap();
        assert!(nys.clamped);
        assert_eq!(nys.term2, 0.0);
    }

    #[test]
    fn corollary_second_term_is_theorem_term_over_sqrt2() {
        let x = gaussian(30, 14, 6);
        let sel = sample_uniform(14, 6, 3, Axis::Columns).unwrap();
        let d = 2;
        let b = v_nys(&x, &sel, Route::Stable).unwrap();
        let v = corollary_input(&b, d).unwrap();
        let s = SketchSpectra::new(&x, &sel).unwrap();
        let (nys, _) = corollary_bounds(1.0, 14, 6, 30, 1.0, &v, d).unwrap();
        let thm = nystrom_bound_with(&x, &sel, d, &s);
        if let Ok(thm) = thm {
            assert!(!nys.clamped);
            assert!((nys.term2 * 2f64.sqrt() - thm.term2).abs() < 1e-9);
        }
    }

    #[test]
    fn difference_curve() {
        assert_eq!(bound_difference(10, 10).unwrap(), 0.0);
        assert!((bound_difference(1_000_000, 10).unwrap() - 5.0).abs() < 1e-3);
        let direct = |p: f64, l: f64| (p * p - l * l).sqrt() - ((p - l) * p).sqrt();
        assert!((bound_difference(300, 70).unwrap() - direct(300.0, 70.0)).abs() < 1e-10);
        let vals: Vec<f64> = (1..300).map(|l| bound_difference(300, l).unwrap()).collect();
        let peak = vals.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap().0;
        assert!(vals[..=peak].windows(2).all(|w| w[1] >= w[0]));
        assert!(vals[peak..].windows(2).all(|w| w[1] <= w[0]));
        assert!(matches!(bound_difference(5, 6), Err(Error::InvalidParameter(_))));
        assert!(matches!(bound_difference(5, 0), Err(Error::InvalidParameter(_))));
    }
}
