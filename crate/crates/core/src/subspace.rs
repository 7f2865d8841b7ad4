//! Orthogonal projectors onto column spans and the distance between them.
//!
//! A [`Projector`] stores an orthonormal basis `Q` of the span rather than
//! the dense `q × q` matrix `QQᵀ`. [`delta`] computes `‖P₁ − P₂‖_F`
//! directly from the two bases, one block of rows at a time, so it never
//! holds more than `q × 64` entries. The shortcut
//! `Δ² = d₁ + d₂ − 2‖Q₁ᵀQ₂‖²_F` is avoided because it cancels
//! catastrophically for nearly equal subspaces (it cannot resolve
//! `Δ` below about `1e-8`).

use alloc::format;
use alloc::vec::Vec;

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::linalg::svd;
use crate::mat::Mat;

const ROW_BLOCK: usize = 64;

/// Orthogonal projector onto a `d`-dimensional subspace of `R^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    q: Mat,
}

impl Projector {
    /// Wraps a basis that is already orthonormal. Not checked.
    pub fn from_orthonormal(q: Mat) -> Self {
        Projector { q }
    }

    pub fn dim(&self) -> usize {
        self.q.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.q.rows()
    }

    pub fn basis(&self) -> &Mat {
        &self.q
    }

    /// The dense `q × q` projector matrix.
    pub fn matrix(&self) -> Mat {
        self.q.matmul_t(&self.q)
    }

    pub fn apply(&self, v: &Mat) -> Mat {
        self.q.matmul(&self.q.t_matmul(v))
    }
}

/// Projector onto the span of the first `d` columns of `b`.
///
/// Built from the left singular vectors of `B_d`, which equals
/// `B_d(B_dᵀB_d)⁻¹B_dᵀ` without forming the Gram inverse.
pub fn projector(b: &Mat, d: usize) -> Result<Projector> {
    if d == 0 || d > b.cols() {
        return Err(Error::InvalidParameter(format!(
            "subspace dimension d = {d} outside 1..={}",
            b.cols()
        )));
    }
    if d > b.rows() {
        return Err(Error::Rank { requested: d, rank: b.rows() });
    }
    let s = svd(&b.leading_columns(d), None)?;
    if s.rank < d {
        return Err(Error::Rank { requested: d, rank: s.rank });
    }
    Ok(Projector { q: s.u })
}

pub fn basis_projector(basis: &Basis, d: usize) -> Result<Projector> {
    projector(&basis.b, d)
}

/// `‖P₁ − P₂‖_F`.
pub fn delta(p1: &Projector, p2: &Projector) -> Result<f64> {
    let q = p1.ambient_dim();
    if q != p2.ambient_dim() {
        return Err(Error::InvalidParameter(format!(
            "ambient dimensions differ: {q} vs {}",
            p2.ambient_dim()
        )));
    }
    let (a, b) = (&p1.q, &p2.q);
    let mut total = 0.0;
    let mut start = 0;
    while start < q {
        let end = (start + ROW_BLOCK).min(q);
        let rows: Vec<usize> = (start..end).collect();
        // Columns start..end of P₁ − P₂.
        let block = a.matmul_t(&a.select_rows(&rows)).sub(&b.matmul_t(&b.select_rows(&rows)));
        total += block.data().iter().map(|v| v * v).sum::<f64>();
        start = end;
    }
    Ok(libm::sqrt(total))
}

/// Distance between the spans of the first `d` columns of two matrices.
pub fn delta_of(b1: &Mat, b2: &Mat, d: usize) -> Result<f64> {
    delta(&projector(b1, d)?, &projector(b2, d)?)
}

/// Ratio of the distance from `approx` to `exact` over the distance from
/// the column-sampling `reference` to `exact`, all truncated to `d`.
/// Values above one mean the method does worse than column sampling.
pub fn relative_error(approx: &Basis, reference: &Basis, exact: &Basis, d: usize) -> Result<f64> {
    let dim = exact.ambient_dim();
    for b in [approx, reference] {
        if b.ambient_dim() != dim {
            return Err(Error::InvalidParameter(format!(
                "{} basis lives in R^{} but the exact basis in R^{dim}",
                b.method,
                b.ambient_dim()
            )));
        }
    }
    let pe = projector(&exact.b, d)?;
    let denom = delta(&projector(&reference.b, d)?, &pe)?;
    if denom < 1e-12 {
        return Err(Error::DegenerateReference(denom));
    }
    Ok(delta(&projector(&approx.b, d)?, &pe)? / denom)
}
