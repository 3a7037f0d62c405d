use std::path::Path;

use compdiff::bounds::{
    hs_norm, lower_certificate, sequence_boundary_pinch, sequence_radial, PairSamples, default_radius_grid,
};
use compdiff::experiments::{
    default_window, fit_decay, run_bidisc, run_corner_perturbation, run_smooth_perturbation,
    run_weighted_power, BidiscParams, ExperimentResult,
};
use compdiff::operator::{
    composition_matrix, convergence_horizon, difference_matrix, singular_spectrum,
    weighted_composition_matrix, SingularSpectrum, TruncatedOperator,
};
use compdiff::series::DEFAULT_CORNER_C;
use serde::Serialize;

use crate::config::{Command, RunConfig};
use crate::CliError;

const SMOOTH_ALPHA: f64 = 3.0;
const SMOOTH_C: f64 = 0.005;
const WEIGHTED_ALPHA: f64 = 1.0;
const DEFAULT_INDEX: usize = 16;
const TABLE_ROWS: usize = 10;

/// Runs one configured command, writing its files under `cfg.out`.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    if let Some(t) = cfg.threads {
        // A second initialisation in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    if cfg.dry_run {
        let text = serde_json::to_string_pretty(cfg).map_err(|e| CliError::Config(e.to_string()))?;
        println!("configuration ok\n{text}");
        return Ok(());
    }
    std::fs::create_dir_all(&cfg.out)
        .map_err(|e| CliError::Config(format!("output directory {}: {e}", cfg.out.display())))?;
    match &cfg.command {
        Command::Spectrum => {
            let phi = cfg.parse_symbol("symbol", cfg.symbol.as_ref())?;
            spectrum_command(cfg, |m| composition_matrix(&phi, m))
        }
        Command::DiffSpectrum => {
            let phi = cfg.parse_symbol("phi", cfg.phi.as_ref())?;
            let psi = cfg.parse_symbol("psi", cfg.psi.as_ref())?;
            spectrum_command(cfg, |m| difference_matrix(&phi, &psi, m))
        }
        Command::Weighted => {
            let omega = cfg.parse_symbol("omega", cfg.omega.as_ref())?;
            let phi = cfg.parse_symbol("phi", cfg.phi.as_ref())?;
            spectrum_command(cfg, |m| weighted_composition_matrix(&omega, &phi, m))
        }
        Command::LowerBound => lower_command(cfg),
        Command::UpperBound => upper_command(cfg),
        Command::HsNorm => {
            let phi = cfg.parse_symbol("phi", cfg.phi.as_ref())?;
            let psi = cfg.parse_symbol("psi", cfg.psi.as_ref())?;
            let h = hs_norm(&phi, &psi)?;
            write_json(&cfg.out.join("hs_norm.json"), &h)?;
            println!("method      {}", h.method);
            println!("hs_norm_sq  {:.12e}", h.value);
            println!("divergent   {}", h.divergent);
            Ok(())
        }
        Command::Bidisc => {
            let kind = cfg.require("kind", cfg.kind)?;
            let mut params = BidiscParams::default();
            if let Some(p) = &cfg.phi {
                params.phi0 = cfg.parse_symbol("phi", Some(p))?;
            }
            if let Some(p) = &cfg.psi {
                params.phi1 = cfg.parse_symbol("psi", Some(p))?;
            }
            if let Some(s) = &cfg.symbol {
                params.psi = cfg.parse_symbol("symbol", Some(s))?;
            }
            if cfg.truncation_set {
                params.truncation = cfg.truncation;
                params.triangular_truncation = cfg.truncation;
            }
            experiment_output(cfg, run_bidisc(kind, &params)?)
        }
        Command::Experiment { name } => {
            let res = match name.as_str() {
                "smooth" => run_smooth_perturbation(
                    cfg.alpha.unwrap_or(SMOOTH_ALPHA),
                    cfg.c.unwrap_or(SMOOTH_C),
                    cfg.truncation,
                )?,
                "corner" => run_corner_perturbation(cfg.c.unwrap_or(DEFAULT_CORNER_C), cfg.truncation)?,
                "weighted" => run_weighted_power(cfg.alpha.unwrap_or(WEIGHTED_ALPHA), cfg.truncation)?,
                other => return Err(CliError::Config(format!("unknown experiment `{other}`"))),
            };
            experiment_output(cfg, res)
        }
        Command::Fit => fit_command(cfg),
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn print_spectrum(s: &SingularSpectrum) {
    println!("{:>6}  {:>24}", "n", "sigma_n");
    for (i, v) in s.sigma.iter().take(TABLE_ROWS).enumerate() {
        println!("{:>6}  {:>24.16e}", i + 1, v);
    }
    match s.horizon {
        Some(h) => println!("horizon {h} of {}", s.truncation),
        None => println!("truncation {} (horizon not measured)", s.truncation),
    }
}

fn spectrum_command(
    cfg: &RunConfig,
    build: impl Fn(usize) -> compdiff::Result<TruncatedOperator>,
) -> Result<(), CliError> {
    let s = if cfg.horizon {
        convergence_horizon(&build, cfg.truncation)?
    } else {
        singular_spectrum(&build(cfg.truncation)?)?
    };
    let path = cfg.out.join("spectrum.csv");
    s.save_csv(&path)?;
    print_spectrum(&s);
    println!("wrote {}", path.display());
    Ok(())
}

fn lower_command(cfg: &RunConfig) -> Result<(), CliError> {
    let phi = cfg.parse_symbol("phi", cfg.phi.as_ref())?;
    let psi = cfg.parse_symbol("psi", cfg.psi.as_ref())?;
    let n = cfg.n.unwrap_or(DEFAULT_INDEX);
    let z = match cfg.sequence.as_str() {
        "radial" => sequence_radial(n)?.points,
        _ => sequence_boundary_pinch(2 * n)?,
    };
    let cert = lower_certificate(&phi, &psi, &z)?;
    write_json(&cfg.out.join("certificates.json"), &[&cert])?;
    println!("index               {}", cert.n);
    println!("delta_Z             {:.6e}", cert.delta_z);
    println!("delta_W             {:.6e}", cert.delta_w);
    println!("value_theorem       {:.6e}", cert.value_theorem);
    println!("value_constant_free {:.6e}", cert.value_constant_free);
    Ok(())
}

fn upper_command(cfg: &RunConfig) -> Result<(), CliError> {
    let phi = cfg.parse_symbol("phi", cfg.phi.as_ref())?;
    let psi = cfg.parse_symbol("psi", cfg.psi.as_ref())?;
    let n = cfg.n.unwrap_or(DEFAULT_INDEX);
    let samples = PairSamples::new(&phi, &psi)?;
    let cert = match cfg.r {
        Some(r) => samples.certificate(n, r, &samples.zeros(n, r)?)?,
        None => samples.optimize(n, &default_radius_grid())?.best,
    };
    write_json(&cfg.out.join("certificates.json"), &[&cert])?;
    println!("index               {}", cert.n);
    println!("r                   {:.12}", cert.r);
    println!("sup_b_phi           {:.6e}", cert.sup_b_phi);
    println!("sup_b_psi           {:.6e}", cert.sup_b_psi);
    println!("sup_w_phi           {:.6e}", cert.sup_w_phi);
    println!("sup_w_psi           {:.6e}", cert.sup_w_psi);
    println!("value_constant_free {:.6e}", cert.value_constant_free);
    Ok(())
}

fn fit_command(cfg: &RunConfig) -> Result<(), CliError> {
    let path = cfg
        .csv
        .as_ref()
        .ok_or_else(|| CliError::Config("--csv is required".into()))?;
    let s = SingularSpectrum::load_csv(path)?;
    let window = if cfg.window_set { cfg.window } else { default_window(&s) };
    let fit = fit_decay(&s, cfg.model, window)?;
    write_json(&cfg.out.join("fit.json"), &fit)?;
    println!("model     {}", fit.model.name());
    println!("rate      {:.6}", fit.rate);
    println!("intercept {:.6}", fit.intercept);
    println!("r_squared {:.6}", fit.r_squared);
    println!("window    [{}, {}]", fit.window.0, fit.window.1);
    Ok(())
}

fn experiment_output(cfg: &RunConfig, mut res: ExperimentResult) -> Result<(), CliError> {
    res.write(&cfg.out)?;
    println!("experiment {}", res.experiment);
    for f in &res.fits {
        println!(
            "  fit {:<28} {:<10} rate {:>10.4}  R2 {:.4}  window [{}, {}]",
            f.name,
            f.fit.model.name(),
            f.fit.rate,
            f.fit.r_squared,
            f.fit.window.0,
            f.fit.window.1
        );
    }
    for v in &res.verdicts {
        let band = format!(
            "[{}, {}]",
            v.lo.map_or("-inf".into(), |x| format!("{x:.4}")),
            v.hi.map_or("inf".into(), |x| format!("{x:.4}"))
        );
        println!(
            "  {:<28} {:<12} measured {:>11.4e}  band {}  {}",
            v.name,
            format!("{:?}", v.status).to_lowercase(),
            v.measured,
            band,
            v.detail
        );
    }
    println!("wrote {}", cfg.out.display());
    Ok(())
}
