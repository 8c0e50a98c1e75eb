use alloc::string::String;

/// Errors raised by constructions. Axiom failures are never errors; they
/// show up as residuals in a [`crate::Report`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("cell mismatch: {0}")]
    CellMismatch(String),
    #[error("not a projection (hermitian residual {herm:.3e}, idempotent residual {idem:.3e})")]
    NotAProjection { herm: f64, idem: f64 },
    #[error("matrix is not hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("source index {} carries no basis vector", .0 + 1)]
    EmptyColumn(usize),
    #[error("invalid Q-system: {0}")]
    InvalidQSystem(String),
    #[error("random element kept a degenerate spectrum after {0} attempts")]
    DegenerateRandomElement(usize),
    #[error("normalization failed: {0}")]
    NormalizationFailure(String),
    #[error("ill-typed path: {0}")]
    IllTypedPath(String),
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
}

pub type Result<T> = core::result::Result<T, Error>;
