use num_complex::Complex64;

use crate::error::{Error, Result};

/// Samples with `|z| ≥ 1 − BOUNDARY_GAP` are treated as touching the circle.
pub const BOUNDARY_GAP: f64 = 1e-12;
const REFINE_TOL: f64 = 1e-6;
const MAX_REFINE_SAMPLES: usize = 1 << 22;

fn density(z: Complex64) -> f64 {
    2.0 / (1.0 - z.norm_sqr())
}

fn check_inside(samples: &[Complex64]) -> Result<()> {
    match samples.iter().position(|z| z.norm() >= 1.0 - BOUNDARY_GAP) {
        Some(index) => Err(Error::CurveTouchesBoundary { index }),
        None => Ok(()),
    }
}

/// Running hyperbolic length along a polyline: entry `i` is `ℓ_P` of the
/// first `i + 1` samples. Composite trapezoid on `2|dz|/(1 − |z|²)`.
pub fn cumulative_length(samples: &[Complex64]) -> Result<Vec<f64>> {
    check_inside(samples)?;
    let mut out = Vec::with_capacity(samples.len());
    let mut acc = 0.0;
    let mut prev: Option<(Complex64, f64)> = None;
    for &z in samples {
        let dz = density(z);
        if let Some((p, dp)) = prev {
            acc += 0.5 * (dp + dz) * (z - p).norm();
        }
        out.push(acc);
        prev = Some((z, dz));
    }
    Ok(out)
}

/// Hyperbolic length of an ordered sample path.
pub fn hyperbolic_length(samples: &[Complex64]) -> Result<f64> {
    Ok(cumulative_length(samples)?.last().copied().unwrap_or(0.0))
}

/// Hyperbolic length of a parametrised curve on `[t0, t1]`, doubling the
/// sample count from 64 until the relative change drops below `1e-6`.
pub fn hyperbolic_length_of<F>(curve: F, t0: f64, t1: f64) -> Result<f64>
where
    F: Fn(f64) -> Complex64,
{
    let sample = |m: usize| -> Vec<Complex64> {
        (0..=m)
            .map(|k| curve(t0 + (t1 - t0) * k as f64 / m as f64))
            .collect()
    };
    let mut m = 64;
    let mut prev = hyperbolic_length(&sample(m))?;
    loop {
        m *= 2;
        let next = hyperbolic_length(&sample(m))?;
        if (next - prev).abs() <= REFINE_TOL * next.abs() || m >= MAX_REFINE_SAMPLES {
            return Ok(next);
        }
        prev = next;
    }
}
