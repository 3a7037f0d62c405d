use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boundary::{check_radius, zeros_on, BoundarySamples, UPPER_SAMPLES};
use super::lower::one_minus_sq;
use crate::error::Result;
use crate::hardy::BlaschkeProduct;
use crate::operator::{boundary_sup, operator_norm_bound};
use crate::series::Symbol;

/// Samples with `1 − |φ|² < CONTACT_GAP` are left out of the `w` suprema:
/// `1 − φ̄ψ` is pure rounding noise there.
pub const CONTACT_GAP: f64 = 1e-12;

/// Upper bound for `a_n(C_φ − C_ψ)` from a Blaschke product of degree `n − 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UpperCertificate {
    pub n: usize,
    pub r: f64,
    pub phi: String,
    pub psi: String,
    pub zeros: Vec<Complex64>,
    /// `sup |B∘φ|` on `{|φ| < r}`.
    pub sup_b_phi: f64,
    /// `sup |B∘ψ|` on `{|ψ| < r}`.
    pub sup_b_psi: f64,
    /// `sup ρ(φ, ψ)` on `{|φ| > r}`.
    pub sup_w_phi: f64,
    /// `sup ρ(φ, ψ)` on `{|ψ| > r}`.
    pub sup_w_psi: f64,
    pub norm_phi: f64,
    pub norm_psi: f64,
    pub value_constant_free: f64,
    /// Suprema taken over empty sample sets (reported as 0).
    pub empty_sets: Vec<String>,
    pub samples: usize,
    /// Samples left out of the `w` suprema next to the contact point.
    pub excluded_contact_samples: usize,
    pub constants: String,
    pub sampled_supremum: bool,
}

/// Upper certificate minimised over a grid of radii, with the full trace.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimizedUpper {
    pub best: UpperCertificate,
    /// `(r, value)` for every grid radius.
    pub trace: Vec<(f64, f64)>,
}

/// Default radii: `1 − r = 10^{-k/8}` for `k = 4..=64`.
pub fn default_radius_grid() -> Vec<f64> {
    (4..=64).map(|k| 1.0 - 10f64.powf(-(k as f64) / 8.0)).collect()
}

/// Boundary data of a pair `(φ, ψ)` shared by every `(n, r)` evaluation.
pub struct PairSamples {
    phi: Symbol,
    psi: Symbol,
    sp: BoundarySamples,
    sq: BoundarySamples,
    /// `ρ(φ, ψ)` per sample; `None` inside the contact band.
    w: Vec<Option<f64>>,
    norm_phi: f64,
    norm_psi: f64,
}

fn sup_or_flag(values: impl Iterator<Item = f64>, label: &str, empty: &mut Vec<String>) -> f64 {
    let mut seen = false;
    let mut m = 0.0_f64;
    for v in values {
        seen = true;
        m = m.max(v);
    }
    if !seen {
        empty.push(label.to_string());
    }
    m
}

impl PairSamples {
    pub fn new(phi: &Symbol, psi: &Symbol) -> Result<Self> {
        let sp = BoundarySamples::new(phi, UPPER_SAMPLES)?;
        let sq = BoundarySamples::new(psi, UPPER_SAMPLES)?;
        let w = sp
            .t
            .par_iter()
            .zip(sp.values.par_iter().zip(&sq.values))
            .map(|(&t, (&a, &b))| -> Result<Option<f64>> {
                if one_minus_sq(a) < CONTACT_GAP || one_minus_sq(b) < CONTACT_GAP {
                    return Ok(None);
                }
                let d = phi.difference_at(psi, Complex64::from_polar(1.0, t))?;
                // 1 − φ̄ψ = (1 − |φ|²) − φ̄(ψ − φ)
                let den = Complex64::new(one_minus_sq(a), 0.0) - a.conj() * d;
                Ok(Some((d.norm() / den.norm()).min(1.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            phi: phi.clone(),
            psi: psi.clone(),
            sp,
            sq,
            w,
            norm_phi: operator_norm_bound(phi)?,
            norm_psi: operator_norm_bound(psi)?,
        })
    }

    /// Degree `n − 1` zeros: all on `Ω_r(φ)` when `φ ≡ ψ`, otherwise split
    /// between `Ω_r(φ)` (`⌈(n−1)/2⌉` zeros) and `Ω_r(ψ)`.
    pub fn zeros(&self, n: usize, r: f64) -> Result<BlaschkeProduct> {
        check_radius(r)?;
        let total = n.saturating_sub(1);
        if self.phi.same_map(&self.psi) {
            return zeros_on(&self.phi, &self.sp, r, total);
        }
        let first = total.div_ceil(2);
        let mut z = zeros_on(&self.phi, &self.sp, r, first)?.zeros().to_vec();
        z.extend_from_slice(zeros_on(&self.psi, &self.sq, r, total - first)?.zeros());
        BlaschkeProduct::new(z)
    }

    pub fn certificate(&self, n: usize, r: f64, b: &BlaschkeProduct) -> Result<UpperCertificate> {
        check_radius(r)?;
        let mut empty = Vec::new();
        let sup_b = |vals: &[Complex64]| {
            vals.par_iter()
                .filter(|v| v.norm() < r)
                .map(|&v| b.modulus(v))
                .reduce(|| f64::NEG_INFINITY, f64::max)
        };
        let raw_phi = sup_b(&self.sp.values);
        let raw_psi = sup_b(&self.sq.values);
        let sup_b_phi = sup_or_flag((raw_phi > f64::NEG_INFINITY).then_some(raw_phi).into_iter(), "sup_b_phi", &mut empty);
        let sup_b_psi = sup_or_flag((raw_psi > f64::NEG_INFINITY).then_some(raw_psi).into_iter(), "sup_b_psi", &mut empty);
        let w_over = |vals: &[Complex64]| {
            self.w
                .iter()
                .zip(vals)
                .filter(|(_, v)| v.norm() > r)
                .filter_map(|(w, _)| *w)
                .collect::<Vec<f64>>()
        };
        let sup_w_phi = sup_or_flag(w_over(&self.sp.values).into_iter(), "sup_w_phi", &mut empty);
        let sup_w_psi = sup_or_flag(w_over(&self.sq.values).into_iter(), "sup_w_psi", &mut empty);
        let value = (sup_b_phi + sup_b_psi + sup_w_phi + sup_w_psi) * (self.norm_phi + self.norm_psi);
        Ok(UpperCertificate {
            n,
            r,
            phi: self.phi.name().into(),
            psi: self.psi.name().into(),
            zeros: b.zeros().to_vec(),
            sup_b_phi,
            sup_b_psi,
            sup_w_phi,
            sup_w_psi,
            norm_phi: self.norm_phi,
            norm_psi: self.norm_psi,
            value_constant_free: value,
            empty_sets: empty,
            samples: self.sp.len(),
            excluded_contact_samples: self.w.iter().filter(|w| w.is_none()).count(),
            constants: "unspecified".into(),
            sampled_supremum: true,
        })
    }

    /// Minimum over `radii` of the certificate built with [`Self::zeros`];
    /// ties go to the smallest radius.
    pub fn optimize(&self, n: usize, radii: &[f64]) -> Result<OptimizedUpper> {
        let certs = radii
            .par_iter()
            .map(|&r| {
                let b = self.zeros(n, r)?;
                self.certificate(n, r, &b)
            })
            .collect::<Result<Vec<_>>>()?;
        let trace = certs.iter().map(|c| (c.r, c.value_constant_free)).collect();
        let best = certs
            .into_iter()
            .reduce(|a, b| {
                let better = b.value_constant_free < a.value_constant_free
                    || (b.value_constant_free == a.value_constant_free && b.r < a.r);
                if better {
                    b
                } else {
                    a
                }
            })
            .ok_or_else(|| crate::error::Error::invalid("r", "empty radius grid"))?;
        Ok(OptimizedUpper { best, trace })
    }
}

/// Four-supremum upper bound for `a_n(C_φ − C_ψ)` with the given zeros.
pub fn upper_certificate(
    phi: &Symbol,
    psi: &Symbol,
    n: usize,
    r: f64,
    zeros: &BlaschkeProduct,
) -> Result<UpperCertificate> {
    PairSamples::new(phi, psi)?.certificate(n, r, zeros)
}

/// [`upper_certificate`] minimised over `radii`, zeros placed on the level sets.
pub fn optimize_upper(phi: &Symbol, psi: &Symbol, n: usize, radii: &[f64]) -> Result<OptimizedUpper> {
    PairSamples::new(phi, psi)?.optimize(n, radii)
}

/// Upper bound for `a_n(M_ω C_φ)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightedUpperCertificate {
    pub n: usize,
    pub r: f64,
    pub weight: String,
    pub phi: String,
    pub zeros: Vec<Complex64>,
    /// `sup |B∘φ|` on `{|φ| ≤ r}`.
    pub sup_b_phi: f64,
    /// Sampled `‖ω‖_∞`.
    pub weight_sup: f64,
    pub norm_phi: f64,
    /// `‖M_ω C_φ‖ ≤ ‖ω‖_∞ ‖C_φ‖`, used in place of the exact norm.
    pub norm_t_bound: f64,
    /// `δ₀(r) = sup |ω(φ(e^{it}))|` on `{|φ(e^{it})| > r}`.
    pub delta0: f64,
    pub value_constant_free: f64,
    pub empty_sets: Vec<String>,
    pub constants: String,
    pub sampled_supremum: bool,
}

/// Boundary data for `(ω, φ)` shared across `(n, r)`.
pub struct WeightedSamples {
    omega: Symbol,
    phi: Symbol,
    sp: BoundarySamples,
    omega_of_phi: Vec<f64>,
    weight_sup: f64,
    norm_phi: f64,
}

impl WeightedSamples {
    pub fn new(omega: &Symbol, phi: &Symbol) -> Result<Self> {
        let sp = BoundarySamples::new(phi, UPPER_SAMPLES)?;
        let omega_of_phi = sp
            .values
            .par_iter()
            .map(|&v| omega.evaluate(v).map(|x| x.norm()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            omega: omega.clone(),
            phi: phi.clone(),
            sp,
            omega_of_phi,
            weight_sup: boundary_sup(omega)?,
            norm_phi: operator_norm_bound(phi)?,
        })
    }

    pub fn zeros(&self, n: usize, r: f64) -> Result<BlaschkeProduct> {
        check_radius(r)?;
        zeros_on(&self.phi, &self.sp, r, n.saturating_sub(1))
    }

    pub fn certificate(&self, n: usize, r: f64, b: &BlaschkeProduct) -> Result<WeightedUpperCertificate> {
        check_radius(r)?;
        let mut empty = Vec::new();
        let sup_b_phi = sup_or_flag(
            self.sp.values.iter().filter(|v| v.norm() <= r).map(|&v| b.modulus(v)),
            "sup_b_phi",
            &mut empty,
        );
        let delta0 = sup_or_flag(
            self.sp
                .values
                .iter()
                .zip(&self.omega_of_phi)
                .filter(|(v, _)| v.norm() > r)
                .map(|(_, &o)| o),
            "delta0",
            &mut empty,
        );
        let norm_t = self.weight_sup * self.norm_phi;
        let value = ((sup_b_phi * norm_t).powi(2) + (delta0 * self.norm_phi).powi(2)).sqrt();
        Ok(WeightedUpperCertificate {
            n,
            r,
            weight: self.omega.name().into(),
            phi: self.phi.name().into(),
            zeros: b.zeros().to_vec(),
            sup_b_phi,
            weight_sup: self.weight_sup,
            norm_phi: self.norm_phi,
            norm_t_bound: norm_t,
            delta0,
            value_constant_free: value,
            empty_sets: empty,
            constants: "unspecified".into(),
            sampled_supremum: true,
        })
    }

    /// Minimum over `radii`; ties go to the smallest radius.
    pub fn optimize(&self, n: usize, radii: &[f64]) -> Result<WeightedUpperCertificate> {
        let certs = radii
            .par_iter()
            .map(|&r| self.certificate(n, r, &self.zeros(n, r)?))
            .collect::<Result<Vec<_>>>()?;
        certs
            .into_iter()
            .reduce(|a, b| {
                if b.value_constant_free < a.value_constant_free
                    || (b.value_constant_free == a.value_constant_free && b.r < a.r)
                {
                    b
                } else {
                    a
                }
            })
            .ok_or_else(|| crate::error::Error::invalid("r", "empty radius grid"))
    }
}

/// Upper bound for `a_n(M_ω C_φ)` with the given zeros.
pub fn weighted_upper_certificate(
    omega: &Symbol,
    phi: &Symbol,
    n: usize,
    r: f64,
    zeros: &BlaschkeProduct,
) -> Result<WeightedUpperCertificate> {
    WeightedSamples::new(omega, phi)?.certificate(n, r, zeros)
}
