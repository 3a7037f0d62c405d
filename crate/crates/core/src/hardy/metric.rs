use num_complex::Complex64;

use crate::error::{Error, Result};

const DENOM_FLOOR: f64 = 1e-300;

/// `ρ(z, w) = |z − w| / |1 − z̄w|`.
pub fn pseudo_distance(z: Complex64, w: Complex64) -> Result<f64> {
    let den = (Complex64::new(1.0, 0.0) - z.conj() * w).norm();
    if den < DENOM_FLOOR {
        return Err(Error::DegenerateDenominator);
    }
    Ok(((z - w).norm() / den).min(1.0))
}

/// `d(z, w) = log((1 + ρ)/(1 − ρ))`.
pub fn hyperbolic_distance(z: Complex64, w: Complex64) -> Result<f64> {
    let rho = pseudo_distance(z, w)?;
    // 2 artanh(ρ) is the same quantity without cancellation for small ρ.
    Ok(2.0 * rho.atanh())
}

/// `‖k_w‖² = 1/(1 − |w|²)`.
pub fn kernel_norm_sq(w: Complex64) -> f64 {
    1.0 / (1.0 - w.norm_sqr())
}

/// The involutive disc automorphism `τ_a(z) = (a − z)/(1 − āz)`.
pub fn mobius_involution(a: Complex64, z: Complex64) -> Complex64 {
    (a - z) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}
