//! Crate-wide error type.

/// Errors produced by the toolkit, grouped by the stage that raises them.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid user-facing parameters (degrees, radii, resolutions, ...).
    #[error("config: {0}")]
    Config(String),

    /// Shape or degree mismatch in the pointwise exterior algebra.
    #[error("forms: {0}")]
    Form(String),

    /// The mesh/level-set combination is unusable (empty active mesh,
    /// unreachable immersed element, unreachable macro root, ...).
    #[error("geometry: {0}")]
    Geometry(String),

    /// Assembly was asked to operate on inconsistent data (e.g. a boundary
    /// facet passed to the ghost-penalty loop).
    #[error("assembly: {0}")]
    Assembly(String),

    /// Factorisation or solve failure.
    #[error("solver: {0}")]
    Solver(String),

    /// A numerical rank decision had singular values too close to the
    /// cutoff to be trusted; `gap` is the ratio closest to 1.
    #[error("rank decision ambiguous: value {value:.3e} within 10x of cutoff {cutoff:.3e} (gap {gap:.2})")]
    RankAmbiguous { value: f64, cutoff: f64, gap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
