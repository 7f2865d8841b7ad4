//! Matrix file formats, the experiment grid, timing and the `nyspca` CLI
//! on top of `nyspca-core`.
//!
//! Matrices are stored as DMAT (a 24-byte little-endian header followed by
//! row-major `f64` values) or CSV. [`stream::stream_columns`] reads a column
//! subset of a DMAT file without loading the whole matrix.

pub mod cli;
pub mod csvmat;
pub mod dmat;
pub mod error;
pub mod experiment;
pub mod io;
pub mod plot;
pub mod stream;
pub mod timing;

pub use error::{HarnessError, Result};
pub use experiment::{expand_l_grid, run_experiment, DataSource, ExperimentConfig, LRule, ResultRow};
pub use timing::time_methods;
