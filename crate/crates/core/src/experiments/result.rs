use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::fit::{fit_decay, fit_log_points, DecayFit};
use crate::error::Result;
use crate::operator::SingularSpectrum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Model comparison within the margin.
    Inconclusive,
    /// Degenerate instance with no decay to fit.
    ZeroSlope,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Pass when `lo ≤ measured ≤ hi`.
    Band,
    /// `measured` is an R² difference: pass at `≥ lo`, fail at `≤ −lo`,
    /// inconclusive in between.
    Margin,
}

/// A measured quantity checked against a rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub rule: Rule,
    pub measured: f64,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub status: Status,
    pub detail: String,
}

impl Verdict {
    /// `lo ≤ measured ≤ hi`, missing ends unbounded.
    pub fn band(name: &str, measured: f64, lo: Option<f64>, hi: Option<f64>) -> Self {
        let mut v = Verdict {
            name: name.into(),
            rule: Rule::Band,
            measured,
            lo,
            hi,
            status: Status::Fail,
            detail: String::new(),
        };
        v.status = v.evaluate();
        v
    }

    /// R² lead of one model over another, decided with `margin`.
    pub fn margin(name: &str, lead: f64, margin: f64) -> Self {
        let mut v = Verdict {
            name: name.into(),
            rule: Rule::Margin,
            measured: lead,
            lo: Some(margin),
            hi: None,
            status: Status::Fail,
            detail: String::new(),
        };
        v.status = v.evaluate();
        v
    }

    /// Failure that carries no measurement (e.g. a fit that could not run).
    pub fn failed(name: &str, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            rule: Rule::Band,
            measured: f64::NAN,
            lo: None,
            hi: None,
            status: Status::Fail,
            detail: detail.into(),
        }
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    fn evaluate(&self) -> Status {
        if self.rule == Rule::Margin {
            let m = self.lo.unwrap_or(0.0);
            return if !self.measured.is_finite() || self.measured <= -m {
                Status::Fail
            } else if self.measured >= m {
                Status::Pass
            } else {
                Status::Inconclusive
            };
        }
        let ok = self.measured.is_finite()
            && self.lo.map_or(true, |l| self.measured >= l)
            && self.hi.map_or(true, |h| self.measured <= h);
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Status implied by the stored numbers; special statuses are kept.
    pub fn recheck(&self) -> Status {
        match self.status {
            Status::ZeroSlope => self.status,
            _ if self.measured.is_nan() => Status::Fail,
            _ => self.evaluate(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedSpectrum {
    pub name: String,
    pub spectrum: SingularSpectrum,
}

/// A fit with the data it came from: a named spectrum or explicit points.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedFit {
    pub name: String,
    pub source: FitSource,
    pub fit: DecayFit,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FitSource {
    Spectrum { spectrum: String },
    Points { n: Vec<usize>, log_values: Vec<f64> },
}

/// Everything an experiment produced; verdicts can be re-derived from it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub experiment: String,
    pub parameters: BTreeMap<String, Value>,
    pub spectra: Vec<NamedSpectrum>,
    pub fits: Vec<NamedFit>,
    pub certificates: Vec<Value>,
    pub verdicts: Vec<Verdict>,
    /// Output files, filled in by [`ExperimentResult::write`].
    #[serde(default)]
    pub files: Vec<PathBuf>,
}

impl ExperimentResult {
    pub fn new(experiment: &str) -> Self {
        Self {
            experiment: experiment.into(),
            parameters: BTreeMap::new(),
            spectra: Vec::new(),
            fits: Vec::new(),
            certificates: Vec::new(),
            verdicts: Vec::new(),
            files: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters
            .insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn spectrum(&self, name: &str) -> Option<&SingularSpectrum> {
        self.spectra.iter().find(|s| s.name == name).map(|s| &s.spectrum)
    }

    pub fn fit(&self, name: &str) -> Option<&DecayFit> {
        self.fits.iter().find(|f| f.name == name).map(|f| &f.fit)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts
            .iter()
            .all(|v| matches!(v.status, Status::Pass | Status::ZeroSlope))
    }

    /// Refits every stored fit from its stored data and re-evaluates every
    /// verdict band; true when everything matches what was recorded.
    pub fn recheck(&self) -> bool {
        let fits_ok = self.fits.iter().all(|nf| {
            let refit = match &nf.source {
                FitSource::Spectrum { spectrum } => self
                    .spectrum(spectrum)
                    .ok_or(())
                    .and_then(|s| fit_decay(s, nf.fit.model, nf.fit.window).map_err(|_| ())),
                FitSource::Points { n, log_values } => {
                    fit_log_points(n, log_values, nf.fit.model).map_err(|_| ())
                }
            };
            refit.is_ok_and(|f| {
                (f.rate - nf.fit.rate).abs() <= 1e-12 * (1.0 + f.rate.abs())
                    && (f.r_squared - nf.fit.r_squared).abs() <= 1e-12
            })
        });
        fits_ok && self.verdicts.iter().all(|v| v.recheck() == v.status)
    }

    /// Writes `result.json`, `spectrum.csv` (first spectrum), one
    /// `spectrum_<name>.csv` per further spectrum, and `certificates.json`.
    pub fn write(&mut self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut files = Vec::new();
        for (i, s) in self.spectra.iter().enumerate() {
            let path = if i == 0 {
                dir.join("spectrum.csv")
            } else {
                dir.join(format!("spectrum_{}.csv", s.name))
            };
            s.spectrum.save_csv(&path)?;
            files.push(path);
        }
        let certs = dir.join("certificates.json");
        std::fs::write(&certs, serde_json::to_string_pretty(&self.certificates)?)?;
        files.push(certs);
        let result = dir.join("result.json");
        files.push(result.clone());
        self.files = files;
        std::fs::write(&result, serde_json::to_string_pretty(&self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}
