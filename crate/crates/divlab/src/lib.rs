//! # divlab
//!
//! A numerical laboratory for divergences between positive functionals on
//! finite-dimensional matrix algebras.
//!
//! The crate computes standard f-divergences of density operators along two
//! independent routes and cross-checks them against each other:
//!
//! | Route | Entry point | Mechanism |
//! |-------|-------------|-----------|
//! | spectral | [`divergence::standard_f_divergence`] | joint spectral-overlap data of the relative modular operator |
//! | variational | [`variational::variational_sf`] | truncated integral representations plus a closed-form inner minimization |
//!
//! On top of the two oracles sit Rényi divergences ([`renyi`]), quantum
//! channels for monotonicity experiments ([`channels`]), and perturbed-state
//! identities for relative hamiltonians ([`perturbation`]).
//!
//! ## Conventions
//!
//! - Functionals are *unnormalized* positive semidefinite operators; nothing
//!   assumes unit trace unless stated.
//! - `+inf` is a first-class result, produced only by boundary terms
//!   (`f(0+)`, `f'(+inf)`) hitting strictly positive off-support mass. A
//!   finite sum that overflows raises [`Error::Overflow`] instead.
//! - All operations are pure functions on immutable values and safe to call
//!   concurrently.

use thiserror::Error;

pub mod channels;
pub mod divergence;
pub mod ext;
pub mod fclass;
pub mod perturbation;
pub mod quad;
pub mod renyi;
pub mod report;
pub mod spectral;
pub mod states;
pub mod suites;
pub mod variational;

pub use divergence::{
    classical_f_divergence, relative_entropy, relative_modular_spectrum, standard_f_divergence,
    ModularSpectrum,
};
pub use ext::ExtReal;
pub use fclass::{catalog_lookup, transpose, validate_representation, ConvexFunctionSpec};
pub use spectral::{EigenSystem, HermitianOperator, ZeroPolicy};
pub use states::{ClassicalDistribution, PositiveFunctional};

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input contains non-finite entries")]
    InvalidInput,

    #[error("matrix is not Hermitian: max asymmetry {0:e} exceeds 1e-12")]
    NotHermitian(f64),

    #[error("operator is not positive semidefinite: eigenvalue {0:e} below -tolerance")]
    NotPositive(f64),

    #[error("operator is not faithful (has a zero eigenvalue)")]
    NotFaithful,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionError(usize, usize),

    #[error("lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("function not defined at required point: {0}")]
    DomainError(String),

    #[error("projections do not resolve the identity (residual {0:e})")]
    InvalidPartition(f64),

    #[error("operator is not an orthogonal projection (residual {0:e})")]
    InvalidProjection(f64),

    #[error("unknown or unsupported function: {0}")]
    UnsupportedFunction(String),

    #[error("adaptive quadrature failed to converge (panel error {0:e})")]
    QuadratureError(f64),

    #[error("optimizer failed to converge: residual {residual:e} after {iterations} iterations")]
    OptimizationError { residual: f64, iterations: usize },

    #[error("finite sum overflowed; this is a numerical failure, not a true +inf")]
    Overflow,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Tolerances used across the crate, in one place.
pub mod tol {
    /// Hermiticity check at construction (absolute, entrywise).
    pub const HERMITIAN: f64 = 1e-12;
    /// Support cutoff, relative to the largest eigenvalue.
    pub const SUPPORT_REL: f64 = 1e-10;
    /// PSD slack, relative to the Frobenius norm.
    pub const PSD_REL: f64 = 1e-10;
    /// Spectral-overlap weights below this are eigenvector-orthogonality
    /// noise and are dropped from divergence sums.
    pub const OVERLAP_DROP: f64 = 1e-14;
    /// Absolute per-panel tolerance of the adaptive quadrature.
    pub const QUAD_PANEL: f64 = 1e-10;
    /// An off-support mass at or below this (relative to max(1, trace))
    /// counts as zero in boundary terms.
    pub const OFF_MASS: f64 = 1e-12;
}
