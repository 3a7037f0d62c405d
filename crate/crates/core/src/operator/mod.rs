//! Truncated composition operators and their singular values.

mod matrix;
mod spectrum;

pub use matrix::{
    boundary_sup, composition_matrix, difference_matrix, operator_norm_bound, weighted_composition_matrix,
    TruncatedOperator, VALIDATION_SAMPLES,
};
pub use spectrum::{
    convergence_horizon, convergence_pair, difference_spectrum, horizon_between,
    singular_spectrum, tensor_spectrum, SingularSpectrum, HORIZON_TOL,
};
