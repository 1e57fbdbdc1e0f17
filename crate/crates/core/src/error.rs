//! Error type shared by the whole crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("matrix is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("width matrix real part is not positive definite (min eigenvalue {0:e})")]
    NotPositiveDefinite(f64),

    #[error("ill-conditioned matrix: condition estimate {0:.3e} exceeds 1e12")]
    IllConditioned(f64),

    #[error("matrix determinant must be 1, got {0}")]
    NotUnimodular(f64),

    #[error("zero denominator in rational entry at row {0}, column {1}")]
    ZeroDenominator(usize, usize),

    #[error(
        "defining sequence lies on a single line through the origin of the \
         complex plane; the non-equivalence certificate requires coefficients \
         spanning two real directions"
    )]
    SequenceOnLine,

    #[error(
        "defining sequence is not Hermitian; real-valued synthesis requires \
         c(-k) to equal the conjugate of c(k) for every index k"
    )]
    SequenceNotHermitian,

    #[error(
        "window must be real-valued for this construction \
         (max imaginary part {0:e} on the probe grid)"
    )]
    WindowNotReal(f64),

    #[error(
        "truncation radius {given} too small: the tail bound requires radius >= {required}"
    )]
    TailBound { given: f64, required: f64 },

    #[error("point is not aligned with the sample grid: {0}")]
    OffGrid(String),

    #[error("sample grids do not match: {0}")]
    GridMismatch(String),

    #[error("empty point set")]
    EmptyPoints,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
