use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::fit::{default_window, fit_decay, fit_log_points, DecayFit, DecayModel, MODEL_MARGIN};
use super::result::{ExperimentResult, FitSource, NamedFit, NamedSpectrum, Status, Verdict};
use crate::bounds::{
    default_radius_grid, dyadic_schedule, hs_norm, lower_certificate, radial_lemma_check,
    sequence_boundary_pinch, sequence_radial, triangular_bound, weighted_lower_certificate,
    HorizonPolicy, PairSamples, PairSpectra, WeightedSamples,
};
use crate::error::Result;
use crate::operator::{
    composition_matrix, convergence_pair, difference_matrix, singular_spectrum, tensor_spectrum,
    weighted_composition_matrix, SingularSpectrum, TruncatedOperator,
};
use crate::series::{Symbol, DEFAULT_CORNER_C};

/// Indices at which certificates are evaluated, roughly `8·√2^k`.
pub const CERTIFICATE_INDICES: [usize; 7] = [8, 11, 16, 23, 32, 45, 64];
/// Allowed spread between the decay slopes of certificates and spectrum.
pub const SLOPE_TOL: f64 = 0.5;
/// Index of the ratio test between the corner difference and the corner operator.
pub const CORNER_RATIO_INDEX: usize = 64;
/// Radial sequence size for the corner lemma checks.
pub const CORNER_LEMMA_N: usize = 100;

#[derive(Clone, Debug)]
pub struct CertificateOptions {
    /// Upper end of the spectrum fit window, before clamping to the horizon.
    pub window_end: usize,
    pub indices: Vec<usize>,
    pub radii: Vec<f64>,
}

impl CertificateOptions {
    fn new(window_end: usize) -> Self {
        Self {
            window_end,
            indices: CERTIFICATE_INDICES.to_vec(),
            radii: default_radius_grid(),
        }
    }

    /// Spectrum window `[8, 64]` as in the rate checks.
    pub fn smooth() -> Self {
        Self::new(64)
    }

    /// Default window `[8, 100]`.
    pub fn weighted() -> Self {
        Self::new(100)
    }
}

fn tagged(kind: &str, cert: impl Serialize) -> Value {
    let mut v = serde_json::to_value(cert).unwrap_or(Value::Null);
    if let Value::Object(map) = &mut v {
        map.insert("type".into(), Value::String(kind.into()));
    }
    v
}

fn push_spectrum(res: &mut ExperimentResult, name: &str, spectrum: SingularSpectrum) {
    res.spectra.push(NamedSpectrum {
        name: name.into(),
        spectrum,
    });
}

fn spectrum_fit(
    res: &mut ExperimentResult,
    name: &str,
    spectrum: &str,
    model: DecayModel,
    window: (usize, usize),
) -> Result<DecayFit> {
    let s = res
        .spectrum(spectrum)
        .ok_or_else(|| crate::error::Error::invalid("spectrum", format!("no spectrum named {spectrum}")))?;
    let fit = fit_decay(s, model, window)?;
    res.fits.push(NamedFit {
        name: name.into(),
        source: FitSource::Spectrum {
            spectrum: spectrum.into(),
        },
        fit: fit.clone(),
    });
    Ok(fit)
}

fn points_fit(
    res: &mut ExperimentResult,
    name: &str,
    ns: &[usize],
    log_values: &[f64],
    model: DecayModel,
) -> Result<DecayFit> {
    let fit = fit_log_points(ns, log_values, model)?;
    res.fits.push(NamedFit {
        name: name.into(),
        source: FitSource::Points {
            n: ns.to_vec(),
            log_values: log_values.to_vec(),
        },
        fit: fit.clone(),
    });
    Ok(fit)
}

/// Verdict on the largest pairwise gap between the given decay rates.
fn slope_verdict(rates: &[(&str, Result<DecayFit>)]) -> Verdict {
    let mut ok = Vec::new();
    for (name, fit) in rates {
        match fit {
            Ok(f) => ok.push((*name, f.rate)),
            Err(e) => return Verdict::failed("certificate_slopes", format!("{name}: {e}")),
        }
    }
    let spread = ok
        .iter()
        .flat_map(|a| ok.iter().map(move |b| (a.1 - b.1).abs()))
        .fold(0.0, f64::max);
    let detail = ok
        .iter()
        .map(|(n, r)| format!("{n}={r:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    Verdict::band("certificate_slopes", spread, None, Some(SLOPE_TOL)).with_detail(detail)
}

fn rate_verdict(fit: &Result<DecayFit>, lo: f64, hi: f64) -> Verdict {
    match fit {
        Ok(f) => Verdict::band("rate", f.rate, Some(lo), Some(hi)),
        Err(e) => Verdict::failed("rate", e.to_string()),
    }
}

fn certificate_indices(opts: &CertificateOptions) -> Vec<usize> {
    opts.indices
        .iter()
        .copied()
        .filter(|&n| n >= 2 && n <= opts.window_end)
        .collect()
}

/// `C_φ − C_ψ` with `φ = (1+z)/2`, `ψ = φ + c(z−1)^α`: spectrum, power fit,
/// lower certificates on the pinch sequence, optimised upper certificates.
pub fn run_smooth_perturbation(alpha: f64, c: f64, n: usize) -> Result<ExperimentResult> {
    run_smooth_perturbation_with(alpha, c, n, &CertificateOptions::smooth())
}

pub fn run_smooth_perturbation_with(
    alpha: f64,
    c: f64,
    n: usize,
    opts: &CertificateOptions,
) -> Result<ExperimentResult> {
    let phi = Symbol::half_map();
    let psi = Symbol::power_perturbation(alpha, c)?;
    let mut res = ExperimentResult::new("smooth");
    res.param("alpha", alpha);
    res.param("c", c);
    res.param("N", n);
    res.param("phi", phi.name());
    res.param("psi", psi.name());

    let (coarse, fine) = convergence_pair(|m| difference_matrix(&phi, &psi, m), n)?;
    let window = (8, opts.window_end.min(coarse.trusted()));
    push_spectrum(&mut res, "difference", coarse);
    push_spectrum(&mut res, "difference_2N", fine);
    res.certificates.push(tagged("hs_norm", hs_norm(&phi, &psi)?));

    let sigma = spectrum_fit(&mut res, "difference_power", "difference", DecayModel::Power, window);
    res.verdicts.push(rate_verdict(&sigma, alpha - 2.5, alpha - 1.5));

    let ns = certificate_indices(opts);
    let lowers = ns
        .par_iter()
        .map(|&k| lower_certificate(&phi, &psi, &sequence_boundary_pinch(2 * k)?))
        .collect::<Result<Vec<_>>>()?;
    let samples = PairSamples::new(&phi, &psi)?;
    let uppers = ns
        .iter()
        .map(|&k| samples.optimize(k, &opts.radii))
        .collect::<Result<Vec<_>>>()?;

    let low_logs: Vec<f64> = lowers.iter().map(|c| c.log_value_constant_free).collect();
    let up_logs: Vec<f64> = uppers.iter().map(|u| u.best.value_constant_free.ln()).collect();
    res.certificates.extend(lowers.into_iter().map(|c| tagged("lower", c)));
    res.certificates.extend(uppers.into_iter().map(|u| tagged("upper", u)));
    let lower = points_fit(&mut res, "lower_power", &ns, &low_logs, DecayModel::Power);
    let upper = points_fit(&mut res, "upper_power", &ns, &up_logs, DecayModel::Power);
    res.verdicts
        .push(slope_verdict(&[("lower", lower), ("sigma", sigma), ("upper", upper)]));
    Ok(res)
}

/// Corner map against its `c·exp(−(1−z)^{−1/2})` perturbation.
pub fn run_corner_perturbation(c: f64, n: usize) -> Result<ExperimentResult> {
    let phi = Symbol::corner_map();
    let psi = Symbol::corner_perturbation(c)?;
    let mut res = ExperimentResult::new("corner");
    res.param("c", c);
    res.param("N", n);
    res.param("phi", phi.name());
    res.param("psi", psi.name());

    let (diff, _) = convergence_pair(|m| difference_matrix(&phi, &psi, m), n)?;
    let (single, _) = convergence_pair(|m| composition_matrix(&phi, m), n)?;
    let h = diff.trusted().min(single.trusted());
    let single_window = (16, default_window(&single).1);
    let diff_window = default_window(&diff);
    push_spectrum(&mut res, "difference", diff);
    push_spectrum(&mut res, "single", single);

    let cases = [
        ("difference", diff_window, DecayModel::Stretched, DecayModel::RootExp),
        ("single", single_window, DecayModel::RootExp, DecayModel::Stretched),
    ];
    for (name, window, preferred, other) in cases {
        let a = spectrum_fit(&mut res, &format!("{name}_{}", preferred.name()), name, preferred, window);
        let b = spectrum_fit(&mut res, &format!("{name}_{}", other.name()), name, other, window);
        let r2 = format!("{name}_{}_r2", preferred.name());
        let lead = format!("{name}_{}_lead", preferred.name());
        match (a, b) {
            (Ok(a), Ok(b)) => {
                res.verdicts.push(Verdict::band(&r2, a.r_squared, Some(0.95), None));
                res.verdicts
                    .push(Verdict::margin(&lead, a.r_squared - b.r_squared, MODEL_MARGIN));
            }
            (Err(e), _) | (_, Err(e)) => {
                res.verdicts.push(Verdict::failed(&r2, e.to_string()));
                res.verdicts.push(Verdict::failed(&lead, e.to_string()));
            }
        }
    }

    let (d, s) = (res.spectrum("difference").unwrap(), res.spectrum("single").unwrap());
    let k = CORNER_RATIO_INDEX;
    let ratio = d.get(k) / s.get(k);
    let ratio_verdict = if k <= h {
        Verdict::band("sigma64_ratio", ratio, None, Some(1e-2))
    } else {
        Verdict::failed(
            "sigma64_ratio",
            format!("index {k} beyond horizon {h}; untrusted ratio {ratio:.3e}"),
        )
    };
    let hi = h.min(100);
    let dominance = if hi > 8 {
        let worst = (8..=hi).map(|i| d.get(i) / s.get(i)).fold(0.0, f64::max);
        Verdict::band("difference_below_single", worst, None, Some(1.0 - f64::EPSILON))
    } else {
        Verdict::failed("difference_below_single", format!("common horizon {h} leaves no window"))
    };
    res.verdicts.push(ratio_verdict);
    res.verdicts.push(dominance);

    let lemma = radial_lemma_check(&phi, &psi, CORNER_LEMMA_N)?;
    let worst_gap = lemma.gap_ratios.iter().copied().fold(0.0, f64::max);
    let worst_kernel = lemma.kernel_ratios.iter().copied().fold(f64::INFINITY, f64::min);
    res.verdicts
        .push(Verdict::band("gap_ratio", worst_gap, None, Some(lemma.gap_ratio_bound)));
    res.verdicts
        .push(Verdict::band("kernel_ratio", worst_kernel, Some(lemma.kernel_ratio_bound), None));
    res.certificates.push(tagged("radial_lemmas", &lemma));
    let radial = sequence_radial(CORNER_LEMMA_N)?;
    res.certificates
        .push(tagged("lower", lower_certificate(&phi, &psi, &radial.points)?));
    Ok(res)
}

/// Corner perturbation with the default `c`.
pub fn run_corner_default(n: usize) -> Result<ExperimentResult> {
    run_corner_perturbation(DEFAULT_CORNER_C, n)
}

/// `M_ω C_φ` with `ω = (1−z)^α`, `φ = (1+z)/2`.
pub fn run_weighted_power(alpha: f64, n: usize) -> Result<ExperimentResult> {
    run_weighted_power_with(alpha, n, &CertificateOptions::weighted())
}

pub fn run_weighted_power_with(alpha: f64, n: usize, opts: &CertificateOptions) -> Result<ExperimentResult> {
    let omega = Symbol::weight_power(alpha)?;
    let phi = Symbol::half_map();
    let mut res = ExperimentResult::new("weighted");
    res.param("alpha", alpha);
    res.param("N", n);
    res.param("omega", omega.name());
    res.param("phi", phi.name());

    let (coarse, _) = convergence_pair(|m| weighted_composition_matrix(&omega, &phi, m), n)?;
    let window = (8, opts.window_end.min(coarse.trusted()));
    push_spectrum(&mut res, "weighted", coarse);
    if alpha == 0.0 {
        res.verdicts.push(
            Verdict::failed("rate", "constant weight: the operator is not compact, no decay to fit")
                .with_status(Status::ZeroSlope),
        );
        return Ok(res);
    }
    let sigma = spectrum_fit(&mut res, "weighted_power", "weighted", DecayModel::Power, window);
    res.verdicts.push(rate_verdict(&sigma, alpha - 0.3, alpha + 0.4));

    let ns = certificate_indices(opts);
    let lowers = ns
        .par_iter()
        .map(|&k| weighted_lower_certificate(&omega, &phi, &sequence_boundary_pinch(2 * k)?))
        .collect::<Result<Vec<_>>>()?;
    let samples = WeightedSamples::new(&omega, &phi)?;
    let uppers = ns
        .iter()
        .map(|&k| samples.optimize(k, &opts.radii))
        .collect::<Result<Vec<_>>>()?;
    let low_logs: Vec<f64> = lowers.iter().map(|c| c.log_value_constant_free).collect();
    let up_logs: Vec<f64> = uppers.iter().map(|u| u.value_constant_free.ln()).collect();
    res.certificates.extend(lowers.into_iter().map(|c| tagged("weighted_lower", c)));
    res.certificates.extend(uppers.into_iter().map(|u| tagged("weighted_upper", u)));
    // Slopes are reported as fits only; the rate band is the verdict here.
    let _ = points_fit(&mut res, "lower_power", &ns, &low_logs, DecayModel::Power);
    let _ = points_fit(&mut res, "upper_power", &ns, &up_logs, DecayModel::Power);
    Ok(res)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BidiscKind {
    Split,
    Glued,
    Triangular,
}

impl BidiscKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "split" => Some(BidiscKind::Split),
            "glued" => Some(BidiscKind::Glued),
            "triangular" => Some(BidiscKind::Triangular),
            _ => None,
        }
    }
}

/// Symbols and sizes for the bidisc experiments.
#[derive(Clone, Debug)]
pub struct BidiscParams {
    /// First-variable symbols of the pair.
    pub phi0: Symbol,
    pub phi1: Symbol,
    /// Second-variable factor of split symbols.
    pub psi: Symbol,
    /// Weights of triangularly separated symbols.
    pub u0: Symbol,
    pub u1: Symbol,
    /// One-variable truncation for split and glued symbols.
    pub truncation: usize,
    /// One-variable truncation for the triangular spectra.
    pub triangular_truncation: usize,
    pub k_min: u32,
    pub k_max: u32,
}

impl Default for BidiscParams {
    fn default() -> Self {
        let half = Symbol::dilation(Complex64::new(0.5, 0.0));
        Self {
            phi0: Symbol::corner_map(),
            phi1: Symbol::corner_perturbation(DEFAULT_CORNER_C).expect("default corner c is valid"),
            psi: half.clone(),
            u0: half.clone(),
            u1: half,
            truncation: 32,
            triangular_truncation: 256,
            k_min: 3,
            k_max: 7,
        }
    }
}

pub fn run_bidisc(kind: BidiscKind, params: &BidiscParams) -> Result<ExperimentResult> {
    let mut res = ExperimentResult::new(match kind {
        BidiscKind::Split => "bidisc_split",
        BidiscKind::Glued => "bidisc_glued",
        BidiscKind::Triangular => "bidisc_triangular",
    });
    res.param("phi0", params.phi0.name());
    res.param("phi1", params.phi1.name());
    match kind {
        BidiscKind::Split => split(&mut res, params)?,
        BidiscKind::Glued => glued(&mut res, params)?,
        BidiscKind::Triangular => triangular(&mut res, params)?,
    }
    Ok(res)
}

/// Tensor identity against an explicit Kronecker product, and
/// `a_{mk}(S⊗T) ≥ a_m(S) a_k(T)` for all `m, k ≤ N`.
fn split(res: &mut ExperimentResult, p: &BidiscParams) -> Result<()> {
    let n = p.truncation;
    res.param("psi", p.psi.name());
    res.param("N", n);
    let d = difference_matrix(&p.phi0, &p.phi1, n)?;
    let c = composition_matrix(&p.psi, n)?;
    let s = singular_spectrum(&d)?;
    let t = singular_spectrum(&c)?;
    let kron = singular_spectrum(&d.kron(&c))?;
    let tensor = tensor_spectrum(&s, &t, n * n);
    let scale = kron.get(1).max(f64::MIN_POSITIVE);
    let identity = (1..=n * n)
        .map(|i| (kron.get(i) - tensor.get(i)).abs() / scale)
        .fold(0.0, f64::max);
    let corollary = (1..=n)
        .flat_map(|m| (1..=n).map(move |k| (m, k)))
        .map(|(m, k)| (kron.get(m * k) - s.get(m) * t.get(k)) / scale)
        .fold(f64::INFINITY, f64::min);
    res.verdicts
        .push(Verdict::band("tensor_identity", identity, None, Some(1e-10)));
    res.verdicts
        .push(Verdict::band("tensor_corollary", corollary, Some(-1e-10), None));
    push_spectrum(res, "tensor", tensor);
    push_spectrum(res, "difference", s);
    push_spectrum(res, "second_factor", t);
    push_spectrum(res, "kronecker", kron);
    Ok(())
}

/// Difference of glued symbols on monomials `z₁^i z₂^j`, `i, j < N`: column
/// `(i, j)` holds the first `N` coefficients of `φ^{i+j} − ψ^{i+j}`.
fn glued(res: &mut ExperimentResult, p: &BidiscParams) -> Result<()> {
    let n = p.truncation;
    res.param("N", n);
    let wide = difference_matrix(&p.phi0, &p.phi1, 2 * n - 1)?;
    let columns = (0..n)
        .flat_map(|j| (0..n).map(move |i| i + j))
        .map(|k| wide.column(k)[..n].to_vec())
        .collect();
    let full = TruncatedOperator::from_columns(n, columns, "glued difference".into());
    let restricted = singular_spectrum(&wide.block(n, n))?;
    let one_dim = singular_spectrum(&difference_matrix(&p.phi0, &p.phi1, n)?)?;
    let full = singular_spectrum(&full)?;
    let scale = one_dim.get(1).max(f64::MIN_POSITIVE);
    let identity = (1..=n)
        .map(|i| (restricted.get(i) - one_dim.get(i)).abs() / scale)
        .fold(0.0, f64::max);
    let dominance = (1..=n)
        .map(|i| (full.get(i) - restricted.get(i)) / scale)
        .fold(f64::INFINITY, f64::min);
    res.verdicts
        .push(Verdict::band("restriction_identity", identity, None, Some(1e-10)));
    res.verdicts
        .push(Verdict::band("restriction_lower_bound", dominance, Some(-1e-10), None));
    push_spectrum(res, "glued", full);
    push_spectrum(res, "restricted", restricted);
    Ok(())
}

/// Triangular bound over `K`, with `n_k = 2^K`, fitted against `√(N/log N)`.
fn triangular(res: &mut ExperimentResult, p: &BidiscParams) -> Result<()> {
    let n = p.triangular_truncation;
    res.param("u0", p.u0.name());
    res.param("u1", p.u1.name());
    res.param("N", n);
    res.param("K", (p.k_min, p.k_max));
    let (diff, _) = convergence_pair(|m| difference_matrix(&p.phi0, &p.phi1, m), n)?;
    let (c0, _) = convergence_pair(|m| composition_matrix(&p.phi0, m), n)?;
    let (c1, _) = convergence_pair(|m| composition_matrix(&p.phi1, m), n)?;
    let spectra = PairSpectra { diff, c0, c1 };
    let bounds = (p.k_min..=p.k_max)
        .map(|k| {
            triangular_bound(
                &p.u0,
                &p.u1,
                &p.phi0,
                &p.phi1,
                &dyadic_schedule(k),
                &spectra,
                HorizonPolicy::ClampToHorizon,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let idx: Vec<usize> = bounds.iter().map(|b| b.index).collect();
    let logs: Vec<f64> = bounds.iter().map(|b| b.value.ln()).collect();
    res.certificates.extend(bounds.iter().map(|b| tagged("triangular", b)));
    match points_fit(res, "triangular_root_log", &idx, &logs, DecayModel::RootLog) {
        Ok(f) => {
            res.verdicts
                .push(Verdict::band("exponent_positive", f.rate, Some(f64::MIN_POSITIVE), None));
            res.verdicts
                .push(Verdict::band("exponent_r2", f.r_squared, Some(0.9), None));
        }
        Err(e) => res.verdicts.push(Verdict::failed("exponent_r2", e.to_string())),
    }
    let PairSpectra { diff, c0, c1 } = spectra;
    push_spectrum(res, "difference", diff);
    push_spectrum(res, "c0", c0);
    push_spectrum(res, "c1", c1);
    Ok(())
}
