//! Column (or row) sketches `S = πτ` represented by their index sets.
//!
//! The permutation `π` is never formed. A [`Selection`] stores the sampled
//! indices in draw order, so `indices[0]` becomes the first row/column of the
//! `A₁₁` block. Blocks returned by [`extract_blocks`] live in that permuted
//! order; everything downstream that returns bases undoes it.
//!
//! Sampling is a seeded partial Fisher–Yates shuffle over `0..q` driven by
//! ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`, with bounded draws from
//! `rand`'s `random_range`). The generator and draw order are fixed so a
//! `(q, l, seed, axis)` tuple always yields the same selection.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mat::Mat;

/// Which dimension of the data matrix a sketch samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Columns,
    Rows,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selection {
    indices: Vec<usize>,
    q: usize,
    seed: u64,
    axis: Axis,
}

impl Selection {
    /// An explicit selection. Indices must be distinct and below `q`.
    pub fn from_indices(indices: Vec<usize>, q: usize, axis: Axis) -> Result<Self> {
        if indices.is_empty() || indices.len() > q {
            return Err(Error::InvalidParameter(format!(
                "selection of {} indices from {q} is not allowed",
                indices.len()
            )));
        }
        let mut seen = vec![false; q];
        for &i in &indices {
            if i >= q {
                return Err(Error::InvalidParameter(format!("index {i} out of range 0..{q}")));
            }
            if seen[i] {
                return Err(Error::InvalidParameter(format!("index {i} selected twice")));
            }
            seen[i] = true;
        }
        Ok(Self { indices, q, seed: 0, axis })
    }

    /// The full index set in natural order, i.e. `π = I`.
    pub fn all(q: usize, axis: Axis) -> Self {
        Self { indices: (0..q).collect(), q, seed: 0, axis }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn l(&self) -> usize {
        self.indices.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// Unselected indices in ascending original order.
    pub fn complement(&self) -> Vec<usize> {
        let mut taken = vec![false; self.q];
        for &i in &self.indices {
            taken[i] = true;
        }
        (0..self.q).filter(|&i| !taken[i]).collect()
    }

    /// `indices` followed by `complement()`: row `k` of the permuted matrix
    /// is row `permutation()[k]` of the original.
    pub fn permutation(&self) -> Vec<usize> {
        let mut p = self.indices.clone();
        p.extend(self.complement());
        p
    }

    pub(crate) fn expect_axis(&self, axis: Axis, dim: usize) -> Result<()> {
        if self.axis != axis {
            return Err(Error::InvalidParameter(format!(
                "selection samples {:?} but {:?} are required",
                self.axis, axis
            )));
        }
        if self.q != dim {
            return Err(Error::InvalidParameter(format!(
                "selection ambient dimension {} does not match {dim}",
                self.q
            )));
        }
        Ok(())
    }
}

/// Draws `l` distinct indices uniformly without replacement from `0..q`.
pub fn sample_uniform(q: usize, l: usize, seed: u64, axis: Axis) -> Result<Selection> {
    if l == 0 || l > q {
        return Err(Error::InvalidParameter(format!("cannot sample l = {l} of q = {q}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (0..q).collect();
    for i in 0..l {
        let j = rng.random_range(i..q);
        pool.swap(i, j);
    }
    pool.truncate(l);
    Ok(Selection { indices: pool, q, seed, axis })
}

/// The permuted blocks of a symmetric matrix under a sketch.
#[derive(Debug, Clone, PartialEq)]
pub struct Blocks {
    /// `l × l`, entry `(i, j)` is `A[sel[i]][sel[j]]`.
    pub a11: Mat,
    /// `(q − l) × l`, rows in ascending order of the unselected indices.
    pub a21: Mat,
    /// `q × l`, `a11` stacked over `a21`.
    pub l: Mat,
}

pub const SYMMETRY_TOL: f64 = 1e-10;

pub(crate) fn require_symmetric(a: &Mat) -> Result<()> {
    if !a.is_symmetric(SYMMETRY_TOL) {
        return Err(Error::InvalidInput(format!(
            "matrix {}x{} is not symmetric (max asymmetry {:?})",
            a.rows(),
            a.cols(),
            a.asymmetry()
        )));
    }
    Ok(())
}

pub fn extract_blocks(a: &Mat, sel: &Selection) -> Result<Blocks> {
    require_symmetric(a)?;
    if sel.q != a.rows() {
        return Err(Error::InvalidParameter(format!(
            "selection over {} indices applied to a {}x{} matrix",
            sel.q,
            a.rows(),
            a.cols()
        )));
    }
    let l = a.select_columns(&sel.indices).select_rows(&sel.permutation());
    let k = sel.l();
    let a11 = Mat::from_fn(k, k, |i, j| l.get(i, j));
    let a21 = Mat::from_fn(sel.q - k, k, |i, j| l.get(k + i, j));
    Ok(Blocks { a11, a21, l })
}

/// `x₁ = X·S` for a column sketch, `X₁ = SᵀX` for a row sketch, in
/// selection order.
pub fn subsample(x: &Mat, sel: &Selection) -> Result<Mat> {
    match sel.axis {
        Axis::Columns => {
            sel.expect_axis(Axis::Columns, x.cols())?;
            Ok(x.select_columns(&sel.indices))
        }
        Axis::Rows => {
            sel.expect_axis(Axis::Rows, x.rows())?;
            Ok(x.select_rows(&sel.indices))
        }
    }
}

/// Column sketch `x₁` of `X`; requires a column-axis selection.
pub fn subsample_columns(x: &Mat, sel: &Selection) -> Result<Mat> {
    sel.expect_axis(Axis::Columns, x.cols())?;
    Ok(x.select_columns(&sel.indices))
}

/// Unsampled columns `x₂` of `X`, in ascending original order.
pub(crate) fn remaining_columns(x: &Mat, sel: &Selection) -> Mat {
    x.select_columns(&sel.complement())
}
