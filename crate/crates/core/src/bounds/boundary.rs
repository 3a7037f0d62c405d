//! Boundary samples `φ(e^{it})` and the level sets `{|φ| ≤ r}` they induce.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hardy::{cumulative_length, BlaschkeProduct};
use crate::series::grid::boundary_grid;
use crate::series::Symbol;

/// Uniform part of the boundary grid used by the upper certificates.
pub const UPPER_SAMPLES: usize = 1 << 14;
const BISECTION_STEPS: usize = 60;

/// Samples of a symbol on the circle, parametrised by `t ∈ (0, 2π]` so the
/// contact point `t = 0 ≡ 2π` sits at the ends of the parameter range.
#[derive(Clone, Debug)]
pub struct BoundarySamples {
    pub t: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl BoundarySamples {
    pub fn new(symbol: &Symbol, uniform: usize) -> Result<Self> {
        let grid = boundary_grid(uniform);
        let mut t: Vec<f64> = grid.iter().copied().filter(|&s| s > 0.0).collect();
        t.extend(grid.iter().filter(|&&s| s <= 0.0).map(|s| s + std::f64::consts::TAU));
        let values = t
            .par_iter()
            .map(|&s| symbol.evaluate(Complex64::from_polar(1.0, s)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { t, values })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Maximal runs `[start, end]` (inclusive) of consecutive samples inside
/// `{|φ| ≤ r}`, with a run touching both ends joined across `t = 0`.
fn runs(samples: &BoundarySamples, r: f64) -> Vec<(usize, usize)> {
    let inside: Vec<bool> = samples.values.iter().map(|v| v.norm() <= r).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < inside.len() {
        if inside[i] {
            let start = i;
            while i + 1 < inside.len() && inside[i + 1] {
                i += 1;
            }
            out.push((start, i));
        }
        i += 1;
    }
    if out.len() > 1 && inside[0] && inside[inside.len() - 1] {
        let first = out.remove(0);
        let last = out.last_mut().expect("at least one run");
        // Wrapped run: indices continue past the end into the first run.
        last.1 = first.1 + inside.len();
    }
    out
}

/// Parameter where `|φ(e^{it})|` crosses `r` between `inside` and `outside`.
fn crossing(symbol: &Symbol, r: f64, inside: f64, outside: f64) -> Result<f64> {
    let (mut a, mut b) = (inside, outside);
    for _ in 0..BISECTION_STEPS {
        let m = 0.5 * (a + b);
        if symbol.evaluate(Complex64::from_polar(1.0, m))?.norm() <= r {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(a)
}

/// Ordered polyline through `Ω_r = φ({|φ| ≤ r})`, with the end points moved
/// onto the level `|φ| = r` by bisection. Empty when the level set is.
pub fn level_set_curve(symbol: &Symbol, samples: &BoundarySamples, r: f64) -> Result<Vec<Complex64>> {
    let rs = runs(samples, r);
    match rs.len() {
        0 => return Ok(Vec::new()),
        1 => {}
        components => return Err(Error::DisconnectedLevelSet { components }),
    }
    let (start, end) = rs[0];
    let len = samples.len();
    let at = |k: usize| k % len;
    let tau = std::f64::consts::TAU;
    let mut curve = Vec::with_capacity(end - start + 3);
    let whole = end - start + 1 >= len;
    if !whole {
        let prev = (start + len - 1) % len;
        let (ti, to) = (samples.t[start], samples.t[prev] - if prev > start { tau } else { 0.0 });
        let tc = crossing(symbol, r, ti, to)?;
        curve.push(symbol.evaluate(Complex64::from_polar(1.0, tc))?);
    }
    curve.extend((start..=end).map(|k| samples.values[at(k)]));
    if !whole {
        let next = (end + 1) % len;
        let ti = samples.t[at(end)];
        let to = samples.t[next] + if next <= at(end) { tau } else { 0.0 };
        let tc = crossing(symbol, r, ti, to)?;
        curve.push(symbol.evaluate(Complex64::from_polar(1.0, tc))?);
    }
    Ok(curve)
}

/// `count` points at equal hyperbolic arc length along a polyline: positions
/// `L·i/(count + 1)` for `i = 1..=count`, by linear interpolation.
pub fn equally_spaced(curve: &[Complex64], count: usize) -> Result<Vec<Complex64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if curve.is_empty() {
        return Ok(vec![Complex64::new(0.0, 0.0); count]);
    }
    let cum = cumulative_length(curve)?;
    let total = *cum.last().expect("non-empty");
    let mut out = Vec::with_capacity(count);
    let mut seg = 0;
    for i in 1..=count {
        let target = total * i as f64 / (count + 1) as f64;
        while seg + 1 < cum.len() - 1 && cum[seg + 1] < target {
            seg += 1;
        }
        let p = if cum.len() == 1 {
            curve[0]
        } else {
            let span = cum[seg + 1] - cum[seg];
            let f = if span > 0.0 { (target - cum[seg]) / span } else { 0.0 };
            curve[seg] + (curve[seg + 1] - curve[seg]) * f.clamp(0.0, 1.0)
        };
        out.push(p);
    }
    Ok(out)
}

/// Hyperbolic length of `Ω_r`.
pub fn level_set_length(symbol: &Symbol, samples: &BoundarySamples, r: f64) -> Result<f64> {
    let curve = level_set_curve(symbol, samples, r)?;
    Ok(cumulative_length(&curve)?.last().copied().unwrap_or(0.0))
}

/// `n − 1` zeros at equal hyperbolic spacing along `Ω_r = φ({|φ| ≤ r})`.
/// An empty level set puts every zero at the origin.
pub fn blaschke_zeros_for_symbol(phi: &Symbol, r: f64, n: usize) -> Result<BlaschkeProduct> {
    check_radius(r)?;
    let samples = BoundarySamples::new(phi, UPPER_SAMPLES)?;
    zeros_on(phi, &samples, r, n.saturating_sub(1))
}

pub(crate) fn zeros_on(
    phi: &Symbol,
    samples: &BoundarySamples,
    r: f64,
    count: usize,
) -> Result<BlaschkeProduct> {
    let curve = level_set_curve(phi, samples, r)?;
    BlaschkeProduct::new(equally_spaced(&curve, count)?)
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::invalid("r", format!("radius {r} is not in (0, 1)")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_map_level_set_is_one_arc() {
        let phi = Symbol::half_map();
        let s = BoundarySamples::new(&phi, 1024).unwrap();
        let curve = level_set_curve(&phi, &s, 0.9).unwrap();
        assert!((curve[0].norm() - 0.9).abs() < 1e-12);
        assert!((curve.last().unwrap().norm() - 0.9).abs() < 1e-12);
        // The arc is symmetric under conjugation; its midpoint is φ(−1) = 0.
        let mid = equally_spaced(&curve, 1).unwrap()[0];
        assert!(mid.norm() < 1e-3, "{mid}");
    }

    #[test]
    fn dilation_level_set_is_whole_circle() {
        let phi = Symbol::dilation(Complex64::new(0.5, 0.0));
        let s = BoundarySamples::new(&phi, 256).unwrap();
        assert_eq!(runs(&s, 0.9).len(), 1);
        let len = level_set_length(&phi, &s, 0.9).unwrap();
        // Circle of radius 1/2: 2π·(1/2)·2/(1 − 1/4).
        assert!((len - 2.0 * std::f64::consts::PI * 0.5 * 2.0 / 0.75).abs() < 1e-3);
        assert!(level_set_curve(&phi, &s, 0.3).unwrap().is_empty());
    }
}
