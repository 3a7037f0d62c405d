//! Boundary sampling grids on the unit circle.
//!
//! The catalogued maps touch the circle only at `z = 1`, so grids combine a
//! uniform sweep with a geometric one, `t = ±π 2^{-m/8}`, clustering at `t = 0`.

use std::f64::consts::PI;

/// Geometric levels per halving of `t`.
pub const LEVELS_PER_OCTAVE: usize = 8;
/// Number of octaves of the geometric part; reaches `t ≈ π 2^{-44} ≈ 1.8e-13`.
pub const OCTAVES: usize = 44;

/// Sorted angles in `(-π, π]`: `uniform` equispaced points, the geometric
/// cluster at 0, and `t = 0` itself.
pub fn boundary_grid(uniform: usize) -> Vec<f64> {
    let mut ts = Vec::with_capacity(uniform + 2 * LEVELS_PER_OCTAVE * OCTAVES + 1);
    for k in 0..uniform {
        // t = -π + 2π (k + 1)/M lands in (-π, π] and hits 0 for even M.
        ts.push(-PI + 2.0 * PI * (k + 1) as f64 / uniform as f64);
    }
    for m in 1..=LEVELS_PER_OCTAVE * OCTAVES {
        let t = PI * 2f64.powf(-(m as f64) / LEVELS_PER_OCTAVE as f64);
        ts.push(t);
        ts.push(-t);
    }
    ts.push(0.0);
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-300);
    ts
}

/// Log-spaced magnitudes in `[lo, hi]`, both signs, for expansion checks.
pub fn log_band(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let count = (decades * per_decade as f64).ceil() as usize + 1;
    let mut out = Vec::with_capacity(2 * count);
    for k in 0..count {
        let t = lo * 10f64.powf(decades * k as f64 / (count - 1).max(1) as f64);
        out.push(t);
        out.push(-t);
    }
    out
}
