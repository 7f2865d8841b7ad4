//! Approximate eigenvector bases and the method tags that produced them.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::sketch::{Axis, Selection};

/// Which estimator produced a basis.
///
/// `Exact` is the dense-SVD reference. The `V*` methods approximate right
/// singular vectors of the data matrix (p-dimensional), the `U*` methods
/// approximate left singular vectors (n-dimensional).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Exact,
    VNys,
    VCs,
    UNys,
    UCs,
    UHatNys,
    UHatCs,
    UHat,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Exact,
        Method::VNys,
        Method::VCs,
        Method::UNys,
        Method::UCs,
        Method::UHatNys,
        Method::UHatCs,
        Method::UHat,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::VNys => "v_nys",
            Method::VCs => "v_cs",
            Method::UNys => "u_nys",
            Method::UCs => "u_cs",
            Method::UHatNys => "u_hat_nys",
            Method::UHatCs => "u_hat_cs",
            Method::UHat => "u_hat",
        }
    }

    /// True for methods whose target is the right singular subspace.
    pub fn targets_v(self) -> bool {
        matches!(self, Method::Exact | Method::VNys | Method::VCs)
    }

    /// The column-sampling method used as the denominator of the relative
    /// error for this method's target.
    pub fn reference(self) -> Method {
        if self.targets_v() {
            Method::VCs
        } else {
            Method::UCs
        }
    }

    /// Sampling axis of the sketch this method consumes. Only `u_nys` and
    /// `u_cs` sample rows (observations); everything else samples columns.
    pub fn axis(self) -> Axis {
        match self {
            Method::UNys | Method::UCs => Axis::Rows,
            _ => Axis::Columns,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method tag {s:?}")))
    }
}

/// Computation route for the Nyström approximation to `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Eigendecompose the `l × l` block `n⁻¹ x₁ᵀx₁`; stores `l²` entries.
    Space,
    /// SVD of the sampled columns `x₁` directly; stores `n·l` entries.
    #[default]
    Stable,
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "space" => Ok(Route::Space),
            "stable" => Ok(Route::Stable),
            _ => Err(Error::InvalidParameter(format!("unknown route {s:?}"))),
        }
    }
}

/// An approximate eigenvector matrix with optional eigenvalue estimates.
///
/// Rows are always in the original coordinate order of the data, whatever
/// permutation the sketch applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub b: Mat,
    pub eigvals: Option<Vec<f64>>,
    pub orthonormal: bool,
    pub method: Method,
    pub sel: Option<Selection>,
    /// Whether the `√(l/q)` style normalization was applied to `b` and the
    /// eigenvalue estimates. Spans do not depend on it.
    pub scale_applied: bool,
}

impl Basis {
    pub fn ambient_dim(&self) -> usize {
        self.b.rows()
    }

    pub fn ncols(&self) -> usize {
        self.b.cols()
    }

    /// Keeps the first `d` columns and eigenvalues.
    pub fn truncate(&self, d: usize) -> Result<Basis> {
        if d == 0 || d > self.b.cols() {
            return Err(Error::InvalidParameter(format!(
                "cannot truncate a {}-column basis to d = {d}",
                self.b.cols()
            )));
        }
        Ok(Basis {
            b: self.b.leading_columns(d),
            eigvals: self.eigvals.as_ref().map(|e| e[..d].to_vec()),
            orthonormal: self.orthonormal,
            method: self.method,
            sel: self.sel.clone(),
            scale_applied: self.scale_applied,
        })
    }
}
