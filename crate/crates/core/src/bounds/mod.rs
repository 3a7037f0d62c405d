//! Lower and upper certificates for approximation numbers and the
//! Hilbert–Schmidt boundary integral.
//!
//! Every certificate is evaluated without the unspecified absolute constants
//! of the underlying inequalities and carries `constants: "unspecified"`.
//! Boundary suprema are sampled, flagged by `sampled_supremum: true`.

mod bidisc;
mod boundary;
mod hs;
mod lower;
mod sequences;
mod upper;

pub use bidisc::{
    difference_bound_from_norms, dyadic_schedule, triangular_bound, weighted_difference_bound,
    BoundTerm, HorizonPolicy, PairSpectra, TriangularBound, WeightPair,
};
pub use boundary::{
    blaschke_zeros_for_symbol, equally_spaced, level_set_curve, level_set_length, BoundarySamples,
    UPPER_SAMPLES,
};
pub use hs::{hs_norm, HsNorm};
pub use lower::{lower_certificate, weighted_lower_certificate, LowerCertificate, COLLISION_TOL};
pub use sequences::{
    radial_lemma_check, sequence_boundary_pinch, sequence_radial, RadialLemmaCheck, RadialSequence,
};
pub use upper::{
    default_radius_grid, optimize_upper, upper_certificate, weighted_upper_certificate,
    OptimizedUpper, PairSamples, UpperCertificate, WeightedSamples, WeightedUpperCertificate,
    CONTACT_GAP,
};
