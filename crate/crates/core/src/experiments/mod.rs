//! End-to-end drivers for the example families, decay-model fits and
//! serialisable results.

mod drivers;
mod fit;
mod result;

pub use drivers::{
    run_bidisc, run_corner_default, run_corner_perturbation, run_smooth_perturbation,
    run_smooth_perturbation_with, run_weighted_power, run_weighted_power_with, BidiscKind,
    BidiscParams, CertificateOptions, CERTIFICATE_INDICES, CORNER_LEMMA_N, CORNER_RATIO_INDEX,
    SLOPE_TOL,
};
pub use fit::{
    compare_fits, default_window, fit_decay, fit_log_points, fit_points, linear_regression,
    Comparison, DecayFit, DecayModel, DEFAULT_WINDOW_END, DEFAULT_WINDOW_START, MODEL_MARGIN,
};
pub use result::{ExperimentResult, FitSource, NamedFit, NamedSpectrum, Rule, Status, Verdict};
