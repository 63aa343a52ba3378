//! Toeplitz inverses, Wiener-Hopf factorization and Verblunsky coefficients
//! of weights on the unit circle.
//!
//! The crate is organised around [`series::LaurentSeries`], a truncated
//! two-sided coefficient sequence, and builds on it:
//!
//! - [`wienerhopf`]: winding numbers, the factorization `phi = phi_+ phi_-`,
//!   the Szegő function and the reflection coefficient of a weight;
//! - [`toeplitz`]: finite sections, their inverses and the decay of the
//!   difference to the semi-infinite inverse;
//! - [`opuc`]: monic orthogonal polynomials and Verblunsky coefficients from
//!   moments;
//! - [`bo`]: the same coefficients through a Fredholm fixed-point equation,
//!   with Baxter and Born-type summaries;
//! - [`gi`]: the half-order Sobolev norm, the Born map and the square-sum bound;
//! - [`closedforms`]: two weights with explicitly known coefficients.

pub mod bo;
pub mod closedforms;
pub mod error;
mod fit;
pub mod gi;
pub mod opuc;
pub mod series;
pub mod toeplitz;
pub mod wienerhopf;

pub use error::{Error, Result};
pub use series::{BeurlingWeight, LaurentSeries, SpectralGrid, Support};
pub use wienerhopf::{factorize, reflection_coefficient, WienerHopfFactorization};
