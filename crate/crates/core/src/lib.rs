//! Approximation numbers of differences of composition operators on the Hardy
//! space `H²` of the disc and bidisc.
//!
//! The crate builds truncated matrices of `C_φ`, `M_ω C_φ` and their
//! differences from Taylor data, extracts singular values, and evaluates the
//! lower and upper bound certificates built from interpolating sequences,
//! Carleson measures and Blaschke products.
//!
//! Modules, bottom-up:
//! - [`series`]: symbol catalogue, evaluation, Taylor coefficients.
//! - [`hardy`]: pseudohyperbolic geometry, kernels, Blaschke products,
//!   separation and Carleson estimates.
//! - [`operator`]: truncated operators and their spectra.
//! - [`bounds`]: certificates and the Hilbert–Schmidt boundary integral.
//! - [`experiments`]: end-to-end drivers and decay fits.

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod hardy;
pub mod operator;
pub mod series;

pub use error::{Error, Result};
pub use num_complex::Complex64;
