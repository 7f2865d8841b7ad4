//! Nyström and column-sampling approximations to principal component
//! subspaces, the subspace distance used to compare them, upper bounds on
//! that distance, and simulation designs.
//!
//! The crate is `no_std` with `alloc`; the default `std` feature only
//! forwards to dependencies.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod approx;
pub mod basis;
pub mod bounds;
pub mod error;
pub mod linalg;
pub mod mat;
pub mod simgen;
pub mod sketch;
pub mod subspace;

#[cfg(test)]
mod testutil;

pub use basis::{Basis, Method, Route};
pub use error::{Error, Result};
pub use linalg::{center_columns, exact_pca, pinv_diag, svd, ExactPca, Svd};
pub use mat::Mat;
pub use sketch::{extract_blocks, sample_uniform, subsample, Axis, Blocks, Selection};
pub use subspace::{delta, projector, relative_error, Projector};
