use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expression is not finite at z = {at}")]
    NonFinite { at: Complex64 },
    #[error("reciprocal of a series with zero constant term")]
    DivisionByZeroConstantTerm,
    #[error("exponential of a series whose constant term is not finite")]
    ExpOfSingularSeries,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("parse error at `{token}`: {message}")]
    Parse { token: String, message: String },

    #[error("pseudohyperbolic distance undefined: |1 - conj(z) w| underflows")]
    DegenerateDenominator,
    #[error("curve sample {index} touches the unit circle")]
    CurveTouchesBoundary { index: usize },
    #[error("point sequence contains duplicate points ({i}, {j})")]
    DuplicatePoints { i: usize, j: usize },
    #[error("point {index} lies outside the open unit disc")]
    OutsideDisc { index: usize },

    #[error("symbol `{name}` is not a self-map of the disc (boundary max {max_modulus})")]
    NotSelfMap { name: String, max_modulus: f64 },
    #[error("singular value decomposition failed: {0}")]
    NumericalBreakdown(String),
    #[error("|phi(0)| >= 1, composition operator norm bound is infinite")]
    BoundaryFixedOrigin,

    #[error("sequence index range is empty (start {start} >= n {n})")]
    EmptyRange { start: usize, n: usize },
    #[error("image points w_{i} and w_{j} coincide")]
    CollidingImages { i: usize, j: usize },
    #[error("image of z_{index} lies on the unit circle")]
    ImageOnBoundary { index: usize },
    #[error("sampled level set splits into {components} components")]
    DisconnectedLevelSet { components: usize },
    #[error("index {n} exceeds the trusted horizon {horizon}")]
    HorizonExceeded { n: usize, horizon: usize },
    #[error("weight sup-norm {norm} exceeds 1")]
    WeightTooLarge { norm: f64 },

    #[error("singular value at index {n} is zero inside the fit window")]
    ZeroInWindow { n: usize },
    #[error("fit window [{lo}, {hi}] is not inside [2, {horizon}]")]
    WindowExceedsHorizon { lo: usize, hi: usize, horizon: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than by numerics.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::Parse { .. }
                | Error::NotSelfMap { .. }
                | Error::EmptyRange { .. }
                | Error::DuplicatePoints { .. }
                | Error::OutsideDisc { .. }
                | Error::WindowExceedsHorizon { .. }
                | Error::WeightTooLarge { .. }
        )
    }
}
