//! Bounds for weighted differences and triangularly separated bidisc symbols.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{operator_norm_bound, SingularSpectrum};
use crate::series::grid::boundary_grid;
use crate::series::Symbol;

/// Uniform samples for weight sup-norms.
const WEIGHT_SAMPLES: usize = 4096;
const WEIGHT_TOL: f64 = 1e-12;

/// What to do with an index beyond a spectrum's horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HorizonPolicy {
    /// Fail with `HorizonExceeded`.
    Strict,
    /// Use `σ_{n*}`; valid as an upper estimate since `a_n` is non-increasing.
    ClampToHorizon,
}

/// Spectra of `C_{φ₀} − C_{φ₁}`, `C_{φ₀}` and `C_{φ₁}`.
#[derive(Clone, Debug)]
pub struct PairSpectra {
    pub diff: SingularSpectrum,
    pub c0: SingularSpectrum,
    pub c1: SingularSpectrum,
}

fn approx_number(s: &SingularSpectrum, n: usize, policy: HorizonPolicy) -> Result<(f64, bool)> {
    let horizon = s.trusted().max(1);
    if n <= horizon {
        return Ok((s.get(n), false));
    }
    match policy {
        HorizonPolicy::Strict => Err(Error::HorizonExceeded { n, horizon }),
        HorizonPolicy::ClampToHorizon => Ok((s.get(horizon), true)),
    }
}

/// Boundary values of two weights on the standard grid.
pub struct WeightPair {
    u0: Vec<Complex64>,
    u1: Vec<Complex64>,
}

impl WeightPair {
    pub fn new(u0: &Symbol, u1: &Symbol) -> Result<Self> {
        let grid = boundary_grid(WEIGHT_SAMPLES);
        let sample = |u: &Symbol| -> Result<Vec<Complex64>> {
            grid.iter().map(|&t| u.evaluate(Complex64::from_polar(1.0, t))).collect()
        };
        Ok(Self {
            u0: sample(u0)?,
            u1: sample(u1)?,
        })
    }

    /// `(‖u₀^k‖_∞, ‖u₁^k‖_∞, ‖u₀^k − u₁^k‖_∞)`.
    pub fn norms(&self, k: u32) -> (f64, f64, f64) {
        let mut out = (0.0_f64, 0.0_f64, 0.0_f64);
        for (a, b) in self.u0.iter().zip(&self.u1) {
            let (pa, pb) = (a.powu(k), b.powu(k));
            out.0 = out.0.max(pa.norm());
            out.1 = out.1.max(pb.norm());
            out.2 = out.2.max((pa - pb).norm());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundTerm {
    pub value: f64,
    /// True when a spectrum value was clamped to its horizon.
    pub clamped: bool,
}

/// `min(‖u₀‖ a_n(D) + ‖u₀ − u₁‖ a_n(C_{φ₁}), ‖u₁‖ a_n(D) + ‖u₀ − u₁‖ a_n(C_{φ₀}))`
/// for `D = C_{φ₀} − C_{φ₁}`, from the given norms.
pub fn difference_bound_from_norms(
    norms: (f64, f64, f64),
    n: usize,
    spectra: &PairSpectra,
    policy: HorizonPolicy,
) -> Result<BoundTerm> {
    let (n0, n1, nd) = norms;
    let (d, cd) = approx_number(&spectra.diff, n, policy)?;
    let (a0, c0) = approx_number(&spectra.c0, n, policy)?;
    let (a1, c1) = approx_number(&spectra.c1, n, policy)?;
    Ok(BoundTerm {
        value: (n0 * d + nd * a1).min(n1 * d + nd * a0),
        clamped: cd || c0 || c1,
    })
}

/// Bound for `a_n(M_{u₀}C_{φ₀} − M_{u₁}C_{φ₁})` with sampled weight norms.
pub fn weighted_difference_bound(
    u0: &Symbol,
    u1: &Symbol,
    n: usize,
    spectra: &PairSpectra,
    policy: HorizonPolicy,
) -> Result<BoundTerm> {
    difference_bound_from_norms(WeightPair::new(u0, u1)?.norms(1), n, spectra, policy)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangularBound {
    /// `max(max_k block_k, tail)`.
    pub value: f64,
    /// `N = n₀ + … + n_K − K`.
    pub index: usize,
    pub k_max: usize,
    pub block_terms: Vec<f64>,
    /// `‖u₀‖^{K+1}‖C_{φ₀}‖ + ‖u₁‖^{K+1}‖C_{φ₁}‖`.
    pub tail: f64,
    pub clamped: bool,
}

/// Bound for `a_N(C_{Φ₀} − C_{Φ₁})` with `Φ_i(z₁, z₂) = (φ_i(z₁), u_i(z₁) z₂)`.
pub fn triangular_bound(
    u0: &Symbol,
    u1: &Symbol,
    phi0: &Symbol,
    phi1: &Symbol,
    blocks: &[usize],
    spectra: &PairSpectra,
    policy: HorizonPolicy,
) -> Result<TriangularBound> {
    if blocks.is_empty() || blocks.contains(&0) {
        return Err(Error::invalid("blocks", "need at least one positive block size"));
    }
    let weights = WeightPair::new(u0, u1)?;
    let (s0, s1, _) = weights.norms(1);
    for norm in [s0, s1] {
        if norm > 1.0 + WEIGHT_TOL {
            return Err(Error::WeightTooLarge { norm });
        }
    }
    let k_max = blocks.len() - 1;
    let mut block_terms = Vec::with_capacity(blocks.len());
    let mut clamped = false;
    for (k, &nk) in blocks.iter().enumerate() {
        let term = difference_bound_from_norms(weights.norms(k as u32), nk, spectra, policy)?;
        clamped |= term.clamped;
        block_terms.push(term.value);
    }
    // ‖u^k‖_∞ = ‖u‖_∞^k, so the supremum over k > K sits at k = K + 1.
    let e = (k_max + 1) as i32;
    let tail = s0.powi(e) * operator_norm_bound(phi0)? + s1.powi(e) * operator_norm_bound(phi1)?;
    let value = block_terms.iter().copied().fold(tail, f64::max);
    Ok(TriangularBound {
        value,
        index: blocks.iter().sum::<usize>() - k_max,
        k_max,
        block_terms,
        tail,
        clamped,
    })
}

/// Block sizes `n_k = 2^K` for `k = 0..=K`.
pub fn dyadic_schedule(k: u32) -> Vec<usize> {
    vec![1usize << k; k as usize + 1]
}
