use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{carleson_norm, log_uniform_separation, PointSequence};
use crate::series::Symbol;

/// Tolerance for two image points to count as the same point.
pub const COLLISION_TOL: f64 = 1e-14;

/// Lower bound for `a_n` from an interpolating sequence `Z` and its images `W`.
///
/// Scalars that can underflow (`δ`, the final values) also carry their
/// natural logarithm.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LowerCertificate {
    /// Index bounded: `n = card(Z)`.
    pub n: usize,
    /// `"difference"` for `C_φ − C_ψ`, `"weighted"` for `M_ω C_φ`.
    pub kind: String,
    pub phi: String,
    pub psi: Option<String>,
    pub weight: Option<String>,
    pub z: Vec<Complex64>,
    pub w: Vec<Complex64>,
    #[serde(rename = "delta_Z")]
    pub delta_z: f64,
    #[serde(rename = "delta_W")]
    pub delta_w: f64,
    #[serde(rename = "log_delta_Z")]
    pub log_delta_z: f64,
    #[serde(rename = "log_delta_W")]
    pub log_delta_w: f64,
    #[serde(rename = "carleson_Z")]
    pub carleson_z: f64,
    #[serde(rename = "carleson_W")]
    pub carleson_w: f64,
    #[serde(rename = "M_W")]
    pub m_w: f64,
    pub inf_ratio: f64,
    pub value_theorem: f64,
    pub log_value_theorem: f64,
    pub value_constant_free: f64,
    pub log_value_constant_free: f64,
    pub constants: String,
    pub sampled_supremum: bool,
}

/// `1 − |w|²` without forming `|w|²` near the circle.
pub(crate) fn one_minus_sq(w: Complex64) -> f64 {
    let m = w.norm();
    (1.0 - m) * (1.0 + m)
}

fn images(symbol: &Symbol, z: &PointSequence) -> Result<Vec<Complex64>> {
    z.points().iter().map(|&p| symbol.evaluate(p)).collect()
}

fn check_images(w: &[Complex64]) -> Result<()> {
    if let Some(index) = w.iter().position(|v| !(v.norm() < 1.0)) {
        return Err(Error::ImageOnBoundary { index });
    }
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if (w[i] - w[j]).norm() < COLLISION_TOL {
                return Err(Error::CollidingImages { i, j });
            }
        }
    }
    Ok(())
}

struct Assembled {
    delta_z: (f64, f64),
    delta_w: (f64, f64),
    carleson_z: f64,
    carleson_w: f64,
    log_m_w: f64,
    log_theorem: f64,
    log_free: f64,
}

/// Shared tail of both certificates: `M(W)^{-1} ‖ν_Z‖^{-1/2} √inf` and the
/// logarithmic constant-free form.
fn assemble(z: &PointSequence, w: &PointSequence, inf_ratio: f64) -> Result<Assembled> {
    let log_dz = log_uniform_separation(z)?;
    let log_dw = log_uniform_separation(w)?;
    let carleson_z = carleson_norm(z).geometric;
    let carleson_w = carleson_norm(w).geometric;
    let log_m_w = 0.5 * carleson_w.ln() - log_dw;
    let half_log_inf = 0.5 * inf_ratio.ln();
    let log_theorem = -log_m_w - 0.5 * carleson_z.ln() + half_log_inf;
    let log_free = log_dw + half_log_inf - 0.5 * (1.0 - log_dw).ln() - 0.5 * (1.0 - log_dz).ln();
    Ok(Assembled {
        delta_z: (log_dz.exp(), log_dz),
        delta_w: (log_dw.exp(), log_dw),
        carleson_z,
        carleson_w,
        log_m_w,
        log_theorem,
        log_free,
    })
}

/// Certificate for `a_n(C_φ − C_ψ)` with `n = card(Z)` and `W = φ(Z) ∪ ψ(Z)`.
pub fn lower_certificate(phi: &Symbol, psi: &Symbol, z: &PointSequence) -> Result<LowerCertificate> {
    z.require_distinct()?;
    let wp = images(phi, z)?;
    let wq = images(psi, z)?;
    let mut w = wp.clone();
    w.extend_from_slice(&wq);
    check_images(&w)?;
    let inf_ratio = z
        .points()
        .iter()
        .zip(wp.iter().zip(&wq))
        .map(|(&p, (&a, &b))| {
            let g = one_minus_sq(p);
            g / one_minus_sq(a) + g / one_minus_sq(b)
        })
        .fold(f64::INFINITY, f64::min);
    let wseq = PointSequence::new(w.clone())?;
    let a = assemble(z, &wseq, inf_ratio)?;
    Ok(LowerCertificate {
        n: z.len(),
        kind: "difference".into(),
        phi: phi.name().into(),
        psi: Some(psi.name().into()),
        weight: None,
        z: z.points().to_vec(),
        w,
        delta_z: a.delta_z.0,
        delta_w: a.delta_w.0,
        log_delta_z: a.delta_z.1,
        log_delta_w: a.delta_w.1,
        carleson_z: a.carleson_z,
        carleson_w: a.carleson_w,
        m_w: a.log_m_w.exp(),
        inf_ratio,
        value_theorem: a.log_theorem.exp(),
        log_value_theorem: a.log_theorem,
        value_constant_free: a.log_free.exp(),
        log_value_constant_free: a.log_free,
        constants: "unspecified".into(),
        sampled_supremum: true,
    })
}

/// Certificate for `a_n(M_ω C_φ)` with `W = φ(Z)`; the infimum carries the
/// factor `|ω(z_j)|²`.
pub fn weighted_lower_certificate(
    omega: &Symbol,
    phi: &Symbol,
    z: &PointSequence,
) -> Result<LowerCertificate> {
    z.require_distinct()?;
    let w = images(phi, z)?;
    check_images(&w)?;
    let inf_ratio = z
        .points()
        .iter()
        .zip(&w)
        .map(|(&p, &a)| -> Result<f64> {
            let om = omega.evaluate(p)?.norm_sqr();
            Ok(om * one_minus_sq(p) / one_minus_sq(a))
        })
        .try_fold(f64::INFINITY, |acc, v| v.map(|v| acc.min(v)))?;
    let wseq = PointSequence::new(w.clone())?;
    let a = assemble(z, &wseq, inf_ratio)?;
    Ok(LowerCertificate {
        n: z.len(),
        kind: "weighted".into(),
        phi: phi.name().into(),
        psi: None,
        weight: Some(omega.name().into()),
        z: z.points().to_vec(),
        w,
        delta_z: a.delta_z.0,
        delta_w: a.delta_w.0,
        log_delta_z: a.delta_z.1,
        log_delta_w: a.delta_w.1,
        carleson_z: a.carleson_z,
        carleson_w: a.carleson_w,
        m_w: a.log_m_w.exp(),
        inf_ratio,
        value_theorem: a.log_theorem.exp(),
        log_value_theorem: a.log_theorem,
        value_constant_free: a.log_free.exp(),
        log_value_constant_free: a.log_free,
        constants: "unspecified".into(),
        sampled_supremum: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_example() {
        let z = PointSequence::from_real(&[0.5]).unwrap();
        let c = lower_certificate(
            &Symbol::identity(),
            &Symbol::dilation(Complex64::new(0.5, 0.0)),
            &z,
        )
        .unwrap();
        assert!((c.delta_w - 0.25 / 0.875).abs() < 1e-15);
        assert!((c.inf_ratio - 1.8).abs() < 1e-15);
        assert_eq!(c.delta_z, 1.0);
        assert_eq!(c.w.len(), 2);
    }

    #[test]
    fn equal_symbols_collide() {
        let z = PointSequence::from_real(&[0.1, 0.2]).unwrap();
        let err = lower_certificate(&Symbol::half_map(), &Symbol::half_map(), &z).unwrap_err();
        assert!(matches!(err, Error::CollidingImages { i: 0, j: 2 }));
    }
}
