use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::catalogue::{Family, Symbol};
use super::grid::{boundary_grid, log_band};

/// Tolerance on `|φ(e^{it})| <= 1`.
pub const SELF_MAP_TOL: f64 = 1e-12;
/// Band for `(1 - |ψ(e^{it})|²)/|t|^{1/2}` near the corner.
pub const CORNER_RATIO_BAND: (f64, f64) = (1.2, 1.6);

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NearOneCheck {
    pub t_range: (f64, f64),
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub symbol: String,
    pub samples: usize,
    pub max_modulus: f64,
    pub argmax_t: f64,
    pub pass: bool,
    pub near_one: Option<NearOneCheck>,
}

/// Samples `|symbol(e^{it})|` on the boundary grid with `samples` uniform
/// points (at least 64) and reports the maximum against `1 + 1e-12`.
///
/// Corner-type symbols also get the square-root contact check
/// `1 - |ψ(e^{it})|² ≈ √2 |t|^{1/2}` over `|t| ∈ [1e-6, 1e-3]`.
pub fn validate_self_map(symbol: &Symbol, samples: usize) -> ValidationReport {
    let grid = boundary_grid(samples.max(64));
    let mut max_modulus = 0.0_f64;
    let mut argmax_t = 0.0;
    for &t in &grid {
        let m = match symbol.evaluate(Complex64::from_polar(1.0, t)) {
            Ok(v) => v.norm(),
            Err(_) => f64::INFINITY,
        };
        if m > max_modulus || m.is_nan() {
            max_modulus = if m.is_nan() { f64::INFINITY } else { m };
            argmax_t = t;
        }
    }
    let near_one = match symbol.family() {
        Family::CornerMap | Family::CornerPerturbation { .. } => Some(corner_contact(symbol)),
        _ => None,
    };
    let pass = max_modulus <= 1.0 + SELF_MAP_TOL && near_one.as_ref().map_or(true, |c| c.pass);
    ValidationReport {
        symbol: symbol.name().to_string(),
        samples: grid.len(),
        max_modulus,
        argmax_t,
        pass,
        near_one,
    }
}

fn corner_contact(symbol: &Symbol) -> NearOneCheck {
    let (lo, hi) = (1e-6, 1e-3);
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = f64::NEG_INFINITY;
    for t in log_band(lo, hi, 16) {
        let ratio = match symbol.evaluate(Complex64::from_polar(1.0, t)) {
            Ok(v) => (1.0 - v.norm_sqr()) / t.abs().sqrt(),
            Err(_) => f64::NAN,
        };
        min_ratio = min_ratio.min(ratio);
        max_ratio = max_ratio.max(ratio);
    }
    let pass = min_ratio >= CORNER_RATIO_BAND.0 && max_ratio <= CORNER_RATIO_BAND.1;
    NearOneCheck {
        t_range: (lo, hi),
        min_ratio,
        max_ratio,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_map_passes_with_max_one_at_zero() {
        let r = validate_self_map(&Symbol::half_map(), 256);
        assert!(r.pass);
        assert!((r.max_modulus - 1.0).abs() < 1e-15);
        assert!(r.argmax_t.abs() < 1e-6);
    }

    #[test]
    fn dilation_by_two_fails() {
        let r = validate_self_map(&Symbol::dilation(Complex64::new(2.0, 0.0)), 256);
        assert!(!r.pass);
        assert!((r.max_modulus - 2.0).abs() < 1e-12);
    }

    #[test]
    fn corner_perturbation_is_a_self_map() {
        let r = validate_self_map(&Symbol::corner_perturbation(0.01).unwrap(), 4096);
        assert!(r.pass, "{r:?}");
        let near = r.near_one.unwrap();
        assert!(near.min_ratio >= 1.2 && near.max_ratio <= 1.6, "{near:?}");
    }

    #[test]
    fn power_perturbations_are_self_maps() {
        for alpha in [2.2, 2.5, 3.0, 4.0] {
            let r = validate_self_map(&Symbol::power_perturbation(alpha, 0.005).unwrap(), 4096);
            assert!(r.pass, "alpha {alpha}: {r:?}");
        }
    }
}
