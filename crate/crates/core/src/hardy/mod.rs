//! Disc geometry and `H²` estimates.

mod blaschke;
mod carleson;
mod length;
mod metric;
mod sequence;

pub use blaschke::{blaschke_eval, BlaschkeProduct};
pub use carleson::{carleson_norm, interpolation_constant_bound, CarlesonEstimate, MAX_LEVEL};
pub use length::{cumulative_length, hyperbolic_length, hyperbolic_length_of, BOUNDARY_GAP};
pub use metric::{hyperbolic_distance, kernel_norm_sq, mobius_involution, pseudo_distance};
pub use sequence::{
    log_uniform_separation, uniform_separation, PointSequence, DISTINCT_TOL,
};
