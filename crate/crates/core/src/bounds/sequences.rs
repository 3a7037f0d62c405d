use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::PointSequence;
use crate::series::Symbol;

/// `z_j = (1 + e^{i/(n−j)})/2` for `1 ≤ j ≤ ⌊n/2⌋`.
pub fn sequence_boundary_pinch(n: usize) -> Result<PointSequence> {
    if n < 4 {
        return Err(Error::invalid("n", "boundary pinch sequence needs n >= 4"));
    }
    let pts = (1..=n / 2)
        .map(|j| (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, 1.0 / (n - j) as f64)) / 2.0)
        .collect();
    PointSequence::new(pts)
}

/// Radial sequence `z_j = 1 − e^{−jε}` with `ε = log(n)/n`, kept for
/// `⌈j₀⌉ ≤ j ≤ n` where `j₀ = |log ε|/(2ε)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadialSequence {
    pub points: PointSequence,
    pub eps: f64,
    pub j0: f64,
    /// Index of the first point.
    pub start: usize,
    pub n: usize,
}

impl RadialSequence {
    /// Indices `j` attached to the points, in order.
    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.n
    }
}

pub fn sequence_radial(n: usize) -> Result<RadialSequence> {
    if n < 2 {
        return Err(Error::invalid("n", "radial sequence needs n >= 2"));
    }
    let eps = (n as f64).ln() / n as f64;
    let j0 = eps.ln().abs() / (2.0 * eps);
    let start = j0.ceil().max(1.0) as usize;
    if start >= n {
        return Err(Error::EmptyRange { start, n });
    }
    // 1 − e^{−x} = −expm1(−x) keeps the gap to 1 exact in relative terms.
    let xs: Vec<f64> = (start..=n).map(|j| -(-(j as f64) * eps).exp_m1()).collect();
    Ok(RadialSequence {
        points: PointSequence::from_real(&xs)?,
        eps,
        j0,
        start,
        n,
    })
}

/// Per-index checks on the full radial sequence `z_j = 1 − e^{−jε}`,
/// `1 ≤ j ≤ n`, with images `w_j^{(1)} = φ(z_j)`, `w_j^{(2)} = ψ(z_j)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadialLemmaCheck {
    pub n: usize,
    pub eps: f64,
    /// `(1 − |w_{j+1}^{(1)}|)/(1 − |w_j^{(1)}|)` for `1 ≤ j < n`.
    pub gap_ratios: Vec<f64>,
    /// `e^{−ε/4}`.
    pub gap_ratio_bound: f64,
    /// `min_u (1 − |z_j|²)/(1 − |w_j^{(u)}|²)` for `1 ≤ j ≤ n`.
    pub kernel_ratios: Vec<f64>,
    /// `e^{−nε/2}/2`.
    pub kernel_ratio_bound: f64,
}

impl RadialLemmaCheck {
    pub fn gap_ratios_hold(&self) -> bool {
        self.gap_ratios.iter().all(|&r| r <= self.gap_ratio_bound)
    }

    pub fn kernel_ratios_hold(&self) -> bool {
        self.kernel_ratios.iter().all(|&r| r >= self.kernel_ratio_bound)
    }
}

pub fn radial_lemma_check(phi: &Symbol, psi: &Symbol, n: usize) -> Result<RadialLemmaCheck> {
    if n < 2 {
        return Err(Error::invalid("n", "radial sequence needs n >= 2"));
    }
    let eps = (n as f64).ln() / n as f64;
    let mut gaps = Vec::with_capacity(n);
    let mut kernel_ratios = Vec::with_capacity(n);
    for j in 1..=n {
        let x = j as f64 * eps;
        let z = Complex64::new(-(-x).exp_m1(), 0.0);
        // 1 − |z|² = e^{−x}(2 − e^{−x})
        let gz = (-x).exp() * (2.0 - (-x).exp());
        let w1 = phi.evaluate(z)?;
        let w2 = psi.evaluate(z)?;
        gaps.push(1.0 - w1.norm());
        let g = |w: Complex64| (1.0 - w.norm()) * (1.0 + w.norm());
        kernel_ratios.push((gz / g(w1)).min(gz / g(w2)));
    }
    Ok(RadialLemmaCheck {
        n,
        eps,
        gap_ratios: gaps.windows(2).map(|p| p[1] / p[0]).collect(),
        gap_ratio_bound: (-eps / 4.0).exp(),
        kernel_ratios,
        kernel_ratio_bound: 0.5 * (-(n as f64) * eps / 2.0).exp(),
    })
}
