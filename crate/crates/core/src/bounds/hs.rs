//! Hilbert–Schmidt boundary integral for `C_φ − C_ψ`.
//!
//! Returns the squared norm
//! `(1/2π) ∫ (1 − |φ|²|ψ|²)/((1 − |φ|²)(1 − |ψ|²)) · ρ(φ, ψ)² dθ`,
//! which equals `Σ_k ‖φ^k − ψ^k‖²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lower::one_minus_sq;
use crate::error::Result;
use crate::series::grid::boundary_grid;
use crate::series::Symbol;

const REL_TOL: f64 = 1e-6;
/// Above this `max(|φ|, |ψ|)` on the circle the pair is treated as touching it.
const CONTACT_THRESHOLD: f64 = 1.0 - 1e-6;
/// Shells stop once `1 − |φ|²` or `1 − |ψ|²` falls below this on a shell.
const SHELL_FLOOR: f64 = 1e-10;
/// Successive-shell ratio above which the integral is declared divergent.
const DIVERGENCE_RATIO: f64 = 0.99;
const GAUSS_NODES: usize = 48;
const MAX_TRAPEZOID: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsNorm {
    /// Squared Hilbert–Schmidt norm; `+∞` when divergent.
    pub value: f64,
    pub divergent: bool,
    /// `"trapezoid"`, `"shells"` or `"identical"`.
    pub method: String,
    pub evaluations: usize,
    /// Shell count and limiting ratio for the contact method.
    pub shells: usize,
    pub ratio: Option<f64>,
    /// Angle of the contact point when one was detected.
    pub contact: Option<f64>,
}

fn integrand(phi: &Symbol, psi: &Symbol, t: f64) -> Result<f64> {
    let z = Complex64::from_polar(1.0, t);
    let a = phi.evaluate(z)?;
    let b = psi.evaluate(z)?;
    let d = phi.difference_at(psi, z)?;
    let (ga, gb) = (one_minus_sq(a), one_minus_sq(b));
    let den = Complex64::new(ga, 0.0) - a.conj() * d;
    // 1 − |φ|²|ψ|² = ga + gb − ga·gb
    Ok((ga + gb - ga * gb) / (ga * gb) * d.norm_sqr() / den.norm_sqr())
}

fn trapezoid(phi: &Symbol, psi: &Symbol) -> Result<HsNorm> {
    let mut m = 256;
    let sum = |m: usize, offset: bool| -> Result<f64> {
        let h = 2.0 * PI / m as f64;
        let shift = if offset { 0.5 * h } else { 0.0 };
        (0..m).map(|k| integrand(phi, psi, -PI + shift + h * k as f64)).sum()
    };
    let mut total = sum(m, false)?;
    let mut prev = total / m as f64;
    loop {
        // Midpoints of the current grid double it.
        total += sum(m, true)?;
        m *= 2;
        let cur = total / m as f64;
        if (cur - prev).abs() <= REL_TOL * cur.abs() || m >= MAX_TRAPEZOID {
            return Ok(HsNorm {
                value: cur,
                divergent: false,
                method: "trapezoid".into(),
                evaluations: m,
                shells: 0,
                ratio: None,
                contact: None,
            });
        }
        prev = cur;
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

fn gauss(nodes: &[(f64, f64)], a: f64, b: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = 0.0;
    for &(x, w) in nodes {
        s += w * f(c + h * x)?;
    }
    Ok(h * s)
}

/// Dyadic shells `2^{-j-1}π < |θ − θ*| ≤ 2^{-j}π` around the contact point,
/// summed until precision runs out, then closed with a geometric tail.
fn shells(phi: &Symbol, psi: &Symbol, contact: f64) -> Result<HsNorm> {
    let nodes = gauss_legendre(GAUSS_NODES);
    let f = |t: f64| integrand(phi, psi, t);
    let mut total = 0.0;
    let mut last: Option<f64> = None;
    let mut ratio = None;
    let mut j = 0;
    loop {
        let outer = PI * 2f64.powi(-j);
        let inner = outer / 2.0;
        let edge = [contact + inner, contact - inner];
        let gap = edge
            .iter()
            .map(|&t| -> Result<f64> {
                let z = Complex64::from_polar(1.0, t);
                Ok(one_minus_sq(phi.evaluate(z)?).min(one_minus_sq(psi.evaluate(z)?)))
            })
            .try_fold(f64::INFINITY, |acc, g| g.map(|g| acc.min(g)))?;
        if gap < SHELL_FLOOR && j >= 2 {
            break;
        }
        let shell = gauss(&nodes, contact + inner, contact + outer, f)?
            + gauss(&nodes, contact - outer, contact - inner, f)?;
        total += shell;
        if let Some(prev) = last {
            if prev > 0.0 {
                ratio = Some(shell / prev);
            }
        }
        last = Some(shell);
        j += 1;
        if shell == 0.0 && j >= 2 {
            break;
        }
    }
    let evaluations = 2 * GAUSS_NODES * j as usize;
    let (value, divergent) = match (ratio, last) {
        (Some(r), _) if r > DIVERGENCE_RATIO => (f64::INFINITY, true),
        (Some(r), Some(l)) => (total + l * r / (1.0 - r), false),
        _ => (total, false),
    };
    Ok(HsNorm {
        value,
        divergent,
        method: "shells".into(),
        evaluations,
        shells: j as usize,
        ratio,
        contact: Some(contact),
    })
}

/// Squared Hilbert–Schmidt norm of `C_φ − C_ψ` from the boundary integral.
///
/// Pairs staying away from the circle use the periodic trapezoid rule,
/// doubled until the relative change is below `1e-6`. Pairs touching it are
/// integrated on dyadic shells around the contact point; a shell ratio
/// above `0.99` flags divergence.
pub fn hs_norm(phi: &Symbol, psi: &Symbol) -> Result<HsNorm> {
    if phi.same_map(psi) {
        return Ok(HsNorm {
            value: 0.0,
            divergent: false,
            method: "identical".into(),
            evaluations: 0,
            shells: 0,
            ratio: None,
            contact: None,
        });
    }
    let mut peak = (0.0_f64, 0.0_f64);
    for t in boundary_grid(4096) {
        let z = Complex64::from_polar(1.0, t);
        let m = phi.evaluate(z)?.norm().max(psi.evaluate(z)?.norm());
        if m > peak.0 || (m == peak.0 && t.abs() < peak.1.abs()) {
            peak = (m, t);
        }
    }
    if peak.0 < CONTACT_THRESHOLD {
        trapezoid(phi, psi)
    } else {
        shells(phi, psi, peak.1)
    }
}
