use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::SingularSpectrum;

/// Default lower end of fit windows; earlier indices are dominated by constants.
pub const DEFAULT_WINDOW_START: usize = 8;
/// Default upper end of fit windows before clamping to the horizon.
pub const DEFAULT_WINDOW_END: usize = 100;
/// R² lead required to prefer one model over another.
pub const MODEL_MARGIN: f64 = 0.02;

/// Decay templates, each linear in its own coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum DecayModel {
    /// `σ_n ≈ C n^{-p}`: `log σ` against `log n`.
    Power,
    /// `σ_n ≈ C (log n)^q n^{-p}` with `q` fixed.
    PowerLog { q: f64 },
    /// `log σ_n ≈ b − c n/log n`.
    Stretched,
    /// `log σ_n ≈ b − c √n`.
    RootExp,
    /// `log σ_n ≈ b − c √(n/log n)`.
    RootLog,
}

impl DecayModel {
    pub fn name(&self) -> &'static str {
        match self {
            DecayModel::Power => "power",
            DecayModel::PowerLog { .. } => "power_log",
            DecayModel::Stretched => "stretched",
            DecayModel::RootExp => "root_exp",
            DecayModel::RootLog => "root_log",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "power" => Some(DecayModel::Power),
            "stretched" => Some(DecayModel::Stretched),
            "root_exp" => Some(DecayModel::RootExp),
            "root_log" => Some(DecayModel::RootLog),
            _ => s
                .strip_prefix("power_log:")
                .and_then(|q| q.parse().ok())
                .map(|q| DecayModel::PowerLog { q }),
        }
    }

    fn x(&self, n: f64) -> f64 {
        match self {
            DecayModel::Power | DecayModel::PowerLog { .. } => n.ln(),
            DecayModel::Stretched => n / n.ln(),
            DecayModel::RootExp => n.sqrt(),
            DecayModel::RootLog => (n / n.ln()).sqrt(),
        }
    }

    fn y(&self, n: f64, log_value: f64) -> f64 {
        match self {
            DecayModel::PowerLog { q } => log_value - q * n.ln().ln(),
            _ => log_value,
        }
    }
}

/// Least-squares fit of a decay model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub model: DecayModel,
    /// Decay rate: `p` for the power models, `c` for the exponential ones.
    pub rate: f64,
    /// Intercept of the linearised regression (`log C` or `b`).
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (usize, usize),
    pub points: usize,
}

/// Ordinary least squares `y ≈ a + b x`; returns `(a, b, R²)`.
pub fn linear_regression(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let r2 = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    (intercept, slope, r2)
}

/// Fits `model` to arbitrary `(n, value)` pairs, all values positive.
pub fn fit_points(ns: &[usize], values: &[f64], model: DecayModel) -> Result<DecayFit> {
    if let Some(i) = values.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::ZeroInWindow { n: ns.get(i).copied().unwrap_or(i) });
    }
    let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    fit_log_points(ns, &logs, model)
}

/// As [`fit_points`] with the values given by their logarithms, for data
/// below the floating-point range.
pub fn fit_log_points(ns: &[usize], log_values: &[f64], model: DecayModel) -> Result<DecayFit> {
    if ns.len() < 2 || ns.len() != log_values.len() || ns.iter().any(|&n| n < 2) {
        return Err(Error::invalid("window", "need at least two points with n >= 2"));
    }
    if let Some(i) = log_values.iter().position(|v| !v.is_finite()) {
        return Err(Error::ZeroInWindow { n: ns[i] });
    }
    let x: Vec<f64> = ns.iter().map(|&n| model.x(n as f64)).collect();
    let y: Vec<f64> = ns.iter().zip(log_values).map(|(&n, &v)| model.y(n as f64, v)).collect();
    let (intercept, slope, r_squared) = linear_regression(&x, &y);
    Ok(DecayFit {
        model,
        rate: -slope,
        intercept,
        r_squared,
        window: (ns[0], ns[ns.len() - 1]),
        points: ns.len(),
    })
}

/// Default window `[8, min(100, horizon)]`.
pub fn default_window(spectrum: &SingularSpectrum) -> (usize, usize) {
    (DEFAULT_WINDOW_START, DEFAULT_WINDOW_END.min(spectrum.trusted()))
}

/// Fits `model` to `σ_n` for `n` in `window` (inclusive, one-based).
pub fn fit_decay(spectrum: &SingularSpectrum, model: DecayModel, window: (usize, usize)) -> Result<DecayFit> {
    let (lo, hi) = window;
    let horizon = spectrum.trusted();
    if lo < 2 || hi <= lo || hi > horizon {
        return Err(Error::WindowExceedsHorizon { lo, hi, horizon });
    }
    let ns: Vec<usize> = (lo..=hi).collect();
    let values: Vec<f64> = ns.iter().map(|&n| spectrum.get(n)).collect();
    fit_points(&ns, &values, model)
}

/// Outcome of comparing two fits by R².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    First,
    Second,
    Inconclusive,
}

pub fn compare_fits(first: &DecayFit, second: &DecayFit, margin: f64) -> Comparison {
    let d = first.r_squared - second.r_squared;
    if d >= margin {
        Comparison::First
    } else if -d >= margin {
        Comparison::Second
    } else {
        Comparison::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64, len: usize) -> SingularSpectrum {
        SingularSpectrum::new((1..=len).map(|n| f(n as f64)).collect(), len)
    }

    #[test]
    fn exact_models_are_recovered() {
        let s = synthetic(|n| n.powi(-2), 128);
        let f = fit_decay(&s, DecayModel::Power, (8, 100)).unwrap();
        assert!((f.rate - 2.0).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
        let s = synthetic(|n| (-0.3 * n.sqrt()).exp(), 128);
        let f = fit_decay(&s, DecayModel::RootExp, (8, 100)).unwrap();
        assert!((f.rate - 0.3).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_pollution_lowers_the_exponent() {
        let s = synthetic(|n| n.ln() / n, 64);
        let f = fit_decay(&s, DecayModel::Power, (8, 64)).unwrap();
        // Independent least-squares slope of log σ on log n over 8..=64.
        let pts: Vec<(f64, f64)> = (8..=64).map(|n| n as f64).map(|n| (n.ln(), (n.ln() / n).ln())).collect();
        let k = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (sxx, sxy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 * p.0, a.1 + p.0 * p.1));
        let oracle = -(k * sxy - sx * sy) / (k * sxx - sx * sx);
        assert!((f.rate - oracle).abs() < 1e-10, "{} vs {oracle}", f.rate);
        assert!((oracle - 0.684_937_929).abs() < 1e-8);
        assert!(f.rate < 1.0);
    }

    #[test]
    fn window_checks() {
        let mut s = synthetic(|n| 1.0 / n, 64);
        s.horizon = Some(20);
        assert!(matches!(
            fit_decay(&s, DecayModel::Power, (8, 40)),
            Err(Error::WindowExceedsHorizon { lo: 8, hi: 40, horizon: 20 })
        ));
        assert_eq!(default_window(&s), (8, 20));
        let z = SingularSpectrum::new(vec![1.0, 0.5, 0.0, 0.0], 4);
        assert!(matches!(
            fit_decay(&z, DecayModel::Power, (2, 4)),
            Err(Error::ZeroInWindow { n: 3 })
        ));
    }
}
