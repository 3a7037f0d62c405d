//! Carleson-window estimates for `ν_Z = Σ (1 − |z_j|²) δ_{z_j}`.
//!
//! A window `Q(θ₀, δ)` holds the points with `1 − |z| ≤ δ` and angular
//! distance to `θ₀` at most `δ`; the origin lies in every window with
//! `δ ≥ 1`. Sides run over `δ = 2^{-m}`, `m ≤ 52`, and centres over
//! `θ₀ = −π + kδ/2`.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sequence::{log_uniform_separation, PointSequence};
use crate::error::Result;

pub const MAX_LEVEL: u32 = 52;
/// Below this many centres a level is swept exhaustively.
const BRUTE_FORCE_CENTRES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarlesonEstimate {
    /// `max ν_Z(Q)/δ` over the window grid.
    pub geometric: f64,
    /// `1 + log(1/δ(Z))`; infinite when `Z` has repeated points.
    pub log_bound: f64,
    /// Levels `m` visited (`δ = 2^{-m}`).
    pub levels: u32,
    pub windows_checked: usize,
    /// Side and centre of a maximising window.
    pub argmax_delta: f64,
    pub argmax_theta: f64,
}

struct Atom {
    gap: f64,
    theta: f64,
    mass: f64,
    origin: bool,
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn window_mass(atoms: &[Atom], theta0: f64, delta: f64) -> f64 {
    atoms
        .iter()
        .filter(|a| a.gap <= delta && (a.origin || angular_distance(a.theta, theta0) <= delta))
        .map(|a| a.mass)
        .sum()
}

/// Best window at one level: `(value, theta0, windows checked)`.
fn scan_level(atoms: &[Atom], delta: f64) -> (f64, f64, usize) {
    let step = delta / 2.0;
    let last = (TAU / step).floor() as i64;
    let centres: Vec<i64> = if (last as usize) < BRUTE_FORCE_CENTRES {
        (0..=last).collect()
    } else {
        let mut set = BTreeSet::new();
        for a in atoms.iter().filter(|a| a.gap <= delta) {
            for shift in [-TAU, 0.0, TAU] {
                let lo = ((a.theta + shift - delta + PI) / step).ceil() as i64;
                let hi = ((a.theta + shift + delta + PI) / step).floor() as i64;
                for k in lo.max(0)..=hi.min(last) {
                    set.insert(k);
                }
            }
        }
        set.into_iter().collect()
    };
    let mut best = (0.0, -PI);
    for &k in &centres {
        let theta0 = -PI + k as f64 * step;
        let v = window_mass(atoms, theta0, delta) / delta;
        if v > best.0 {
            best = (v, theta0);
        }
    }
    (best.0, best.1, centres.len())
}

/// Geometric window supremum and the logarithmic bound for `ν_Z`.
pub fn carleson_norm(z: &PointSequence) -> CarlesonEstimate {
    let atoms: Vec<Atom> = z
        .points()
        .iter()
        .map(|p| Atom {
            gap: 1.0 - p.norm(),
            theta: p.arg(),
            mass: 1.0 - p.norm_sqr(),
            origin: p.norm() == 0.0,
        })
        .collect();
    let min_gap = atoms.iter().map(|a| a.gap).fold(f64::INFINITY, f64::min);
    let levels: Vec<u32> = (0..=MAX_LEVEL)
        .take_while(|&m| 2f64.powi(-(m as i32)) >= min_gap)
        .collect();
    let scans: Vec<(f64, f64, usize)> = levels
        .par_iter()
        .map(|&m| scan_level(&atoms, 2f64.powi(-(m as i32))))
        .collect();
    let mut geometric = 0.0;
    let mut argmax = (1.0, -PI);
    let mut windows_checked = 0;
    for (&m, &(v, theta0, count)) in levels.iter().zip(&scans) {
        windows_checked += count;
        if v > geometric {
            geometric = v;
            argmax = (2f64.powi(-(m as i32)), theta0);
        }
    }
    let log_bound = match log_uniform_separation(z) {
        Ok(l) => 1.0 - l,
        Err(_) => f64::INFINITY,
    };
    CarlesonEstimate {
        geometric,
        log_bound,
        levels: levels.len() as u32,
        windows_checked,
        argmax_delta: argmax.0,
        argmax_theta: argmax.1,
    }
}

/// Shapiro–Shields bound `M(Z) ≤ ‖ν_Z‖^{1/2}/δ(Z)` with the geometric estimate.
pub fn interpolation_constant_bound(z: &PointSequence) -> Result<f64> {
    let log_delta = log_uniform_separation(z)?;
    Ok(carleson_norm(z).geometric.sqrt() * (-log_delta).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atoms() {
        let z = PointSequence::from_real(&[0.0]).unwrap();
        assert_eq!(carleson_norm(&z).geometric, 1.0);
        assert_eq!(interpolation_constant_bound(&z).unwrap(), 1.0);
        let z = PointSequence::from_real(&[0.5]).unwrap();
        let est = carleson_norm(&z);
        assert_eq!(est.geometric, 1.5);
        assert_eq!(est.argmax_delta, 0.5);
        assert_eq!(est.log_bound, 1.0);
    }

    #[test]
    fn duplicating_doubles() {
        let a = PointSequence::from_real(&[0.5, 0.9]).unwrap();
        let b = PointSequence::from_real(&[0.5, 0.9, 0.5, 0.9]).unwrap();
        let (ga, gb) = (carleson_norm(&a).geometric, carleson_norm(&b).geometric);
        assert!((gb - 2.0 * ga).abs() < 1e-14);
        assert!(carleson_norm(&b).log_bound.is_infinite());
    }
}
