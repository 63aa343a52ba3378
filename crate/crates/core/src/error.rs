use num_complex::Complex64;
use thiserror::Error;

/// Failures raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("band of half-width {band} aliases on a grid of {grid} points (need a power of two >= {})", 2 * band + 2)]
    BandAliasing { band: usize, grid: usize },

    #[error("symbol nearly vanishes on the unit circle (min |s| = {min:e}, max |s| = {max:e})")]
    NearVanishingSymbol { min: f64, max: f64 },

    #[error("symbol has nonzero winding number {0}")]
    NonzeroWinding(i64),

    #[error("point {0} lies on the unit circle")]
    PointOnCircle(Complex64),

    #[error("Toeplitz section of order {n} is singular (smallest pivot {pivot:e})")]
    SingularSection { n: usize, pivot: f64 },

    #[error("moment section for degree {n} is singular (smallest pivot {pivot:e})")]
    SingularMomentSection { n: usize, pivot: f64 },

    #[error("reflection coefficient is not invertible on the grid (min |r| = {min:e})")]
    ReflectionNotInvertible { min: f64 },

    #[error("fixed-point equation at n = {n} rejected: trace bound {bound}, residual {residual:e}")]
    ContractionFailure { n: usize, bound: f64, residual: f64 },

    #[error("series is not conjugate-symmetric (max deviation {0:e})")]
    SymmetryViolation(f64),

    #[error("no n0 <= {n_max} with rho < 1")]
    NoContraction { n_max: usize },

    #[error("weight has (log w)_0 = {0}; normalize it or allow unnormalized weights")]
    UnnormalizedWeight(Complex64),

    #[error("invalid Beurling weight: {0}")]
    InvalidWeight(String),

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    /// Stable variant name, used for diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::BandAliasing { .. } => "BandAliasing",
            Error::NearVanishingSymbol { .. } => "NearVanishingSymbol",
            Error::NonzeroWinding(_) => "NonzeroWinding",
            Error::PointOnCircle(_) => "PointOnCircle",
            Error::SingularSection { .. } => "SingularSection",
            Error::SingularMomentSection { .. } => "SingularMomentSection",
            Error::ReflectionNotInvertible { .. } => "ReflectionNotInvertible",
            Error::ContractionFailure { .. } => "ContractionFailure",
            Error::SymmetryViolation(_) => "SymmetryViolation",
            Error::NoContraction { .. } => "NoContraction",
            Error::UnnormalizedWeight(_) => "UnnormalizedWeight",
            Error::InvalidWeight(_) => "InvalidWeight",
            Error::Domain(_) => "Domain",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
