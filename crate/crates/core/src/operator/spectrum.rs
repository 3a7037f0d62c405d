use std::io::{Read, Write};
use std::path::Path;

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use super::matrix::{difference_matrix, require_self_map, TruncatedOperator};
use crate::error::{Error, Result};
use crate::series::Symbol;

/// Relative agreement required between the `N` and `2N` truncations.
pub const HORIZON_TOL: f64 = 0.01;

/// Non-increasing singular values of a truncation with its trust horizon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    pub sigma: Vec<f64>,
    /// Truncation size `N` the values come from.
    pub truncation: usize,
    /// Largest `n` with values stable under doubling `N`, when measured.
    pub horizon: Option<usize>,
}

impl SingularSpectrum {
    pub fn new(sigma: Vec<f64>, truncation: usize) -> Self {
        Self {
            sigma,
            truncation,
            horizon: None,
        }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// `σ_n`, one-based; zero past the end.
    pub fn get(&self, n: usize) -> f64 {
        assert!(n >= 1, "singular values are indexed from 1");
        self.sigma.get(n - 1).copied().unwrap_or(0.0)
    }

    /// Horizon if measured, otherwise the full length.
    pub fn trusted(&self) -> usize {
        self.horizon.unwrap_or(self.sigma.len())
    }

    /// CSV with header `n,sigma,N,horizon`; `horizon` is empty when unknown.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "sigma", "N", "horizon"])?;
        let horizon = self.horizon.map(|h| h.to_string()).unwrap_or_default();
        for (i, s) in self.sigma.iter().enumerate() {
            w.write_record([
                (i + 1).to_string(),
                format!("{s:.16e}"),
                self.truncation.to_string(),
                horizon.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    /// Reads the layout written by [`Self::write_csv`].
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            n: usize,
            sigma: f64,
            #[serde(rename = "N")]
            truncation: usize,
            horizon: Option<usize>,
        }
        let mut out = Self::new(Vec::new(), 0);
        for (i, row) in csv::Reader::from_reader(input).deserialize::<Row>().enumerate() {
            let row = row?;
            if row.n != i + 1 {
                return Err(Error::invalid("csv", format!("row {} has n = {}", i + 1, row.n)));
            }
            out.sigma.push(row.sigma);
            out.truncation = row.truncation;
            out.horizon = row.horizon;
        }
        Ok(out)
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Dense SVD of the truncation, values sorted non-increasing.
pub fn singular_spectrum(a: &TruncatedOperator) -> Result<SingularSpectrum> {
    let (m, n) = (a.rows(), a.cols());
    let data = a.data();
    let sigma = if a.is_real() {
        Mat::<f64>::from_fn(m, n, |i, j| data[j * m + i].re).singular_values()
    } else {
        Mat::<c64>::from_fn(m, n, |i, j| data[j * m + i]).singular_values()
    }
    .map_err(|e| Error::NumericalBreakdown(format!("{e:?}")))?;
    // The divide-and-conquer path can return deflated values out of order.
    let mut sigma = sigma;
    sigma.sort_by(|a, b| b.total_cmp(a));
    if sigma.iter().any(|s| !s.is_finite()) {
        return Err(Error::NumericalBreakdown("non-finite singular value".into()));
    }
    Ok(SingularSpectrum::new(sigma, m.max(n)))
}

/// Spectrum of `C_φ − C_ψ` truncated at `N`; structurally equal symbols give
/// the zero spectrum without an SVD.
pub fn difference_spectrum(phi: &Symbol, psi: &Symbol, n: usize) -> Result<SingularSpectrum> {
    if phi.same_map(psi) {
        require_self_map(phi)?;
        return Ok(SingularSpectrum::new(vec![0.0; n], n));
    }
    singular_spectrum(&difference_matrix(phi, psi, n)?)
}

/// The `count` largest products `σ_m τ_n`, sorted non-increasing.
pub fn tensor_spectrum(s: &SingularSpectrum, t: &SingularSpectrum, count: usize) -> SingularSpectrum {
    let mut all: Vec<f64> = s
        .sigma
        .iter()
        .flat_map(|a| t.sigma.iter().map(move |b| a * b))
        .collect();
    all.sort_by(|a, b| b.total_cmp(a));
    all.truncate(count);
    let mut out = SingularSpectrum::new(all, s.truncation * t.truncation);
    if let (Some(hs), Some(ht)) = (s.horizon, t.horizon) {
        out.horizon = Some((hs * ht).min(out.sigma.len()));
    }
    out
}

/// Largest `n*` with `|σ_n − τ_n| ≤ 1% · max(σ_n, τ_n)` for every `n ≤ n*`.
pub fn horizon_between(coarse: &SingularSpectrum, fine: &SingularSpectrum) -> usize {
    let len = coarse.len().min(fine.len());
    (0..len)
        .position(|i| {
            let (a, b) = (coarse.sigma[i], fine.sigma[i]);
            (a - b).abs() > HORIZON_TOL * a.max(b)
        })
        .unwrap_or(len)
}

/// Builds at `N₀` and `2N₀` and returns the `N₀` spectrum with its horizon.
pub fn convergence_horizon<F>(build: F, n0: usize) -> Result<SingularSpectrum>
where
    F: Fn(usize) -> Result<TruncatedOperator>,
{
    Ok(convergence_pair(build, n0)?.0)
}

/// As [`convergence_horizon`], also returning the `2N₀` spectrum.
pub fn convergence_pair<F>(build: F, n0: usize) -> Result<(SingularSpectrum, SingularSpectrum)>
where
    F: Fn(usize) -> Result<TruncatedOperator>,
{
    if n0 < 16 {
        return Err(Error::invalid("N", "horizon detection needs N >= 16"));
    }
    let mut coarse = singular_spectrum(&build(n0)?)?;
    let fine = singular_spectrum(&build(2 * n0)?)?;
    coarse.horizon = Some(horizon_between(&coarse, &fine));
    Ok((coarse, fine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn csv_round_trip() {
        let mut s = SingularSpectrum::new(vec![1.0, 1.0 / 3.0, 1e-300], 8);
        s.horizon = Some(2);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(SingularSpectrum::read_csv(buf.as_slice()).unwrap(), s);
        let t = SingularSpectrum::new(vec![0.5], 4);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(SingularSpectrum::read_csv(buf.as_slice()).unwrap(), t);
    }

    #[test]
    fn csv_layout() {
        let mut s = SingularSpectrum::new(vec![1.0, 0.5], 2);
        s.horizon = Some(2);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "n,sigma,N,horizon\n1,1.0000000000000000e0,2,2\n2,5.0000000000000000e-1,2,2\n"
        );
    }

    #[test]
    fn complex_svd_path() {
        let a = TruncatedOperator::from_fn(2, 2, String::new(), |i, j| {
            if i == j {
                Complex64::new(0.0, if i == 0 { 2.0 } else { -1.0 })
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!(!a.is_real());
        let s = singular_spectrum(&a).unwrap();
        assert!((s.sigma[0] - 2.0).abs() < 1e-14 && (s.sigma[1] - 1.0).abs() < 1e-14);
    }
}
