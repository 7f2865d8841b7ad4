use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input data violates a structural requirement (non-finite entries,
    /// asymmetry, negative singular values, empty matrices).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A scalar or index argument is out of its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A requested dimension exceeds the numerical rank.
    #[error("rank error: requested dimension {requested} but numerical rank is {rank}")]
    Rank { requested: usize, rank: usize },

    /// The sampled block carries no usable spectrum (all-zero columns,
    /// rank-0 principal block, or fewer retained directions than needed).
    #[error("degenerate sketch: {0}")]
    DegenerateSketch(String),

    /// The spectral gap feeding a subspace bound is not positive, so the
    /// bound is vacuous.
    #[error("nonpositive spectral gap {gap:e} at d = {d}")]
    Gap { gap: f64, d: usize },

    /// The column-sampling reference is exact, so the relative error has a
    /// zero denominator.
    #[error("relative error undefined: reference distance {0:e} is below 1e-12")]
    DegenerateReference(f64),

    /// A factorization failed to converge or hit a non-positive pivot.
    #[error("decomposition failed: {0}")]
    Decomposition(String),
}

pub type Result<T> = core::result::Result<T, Error>;
