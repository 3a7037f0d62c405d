use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use compdiff::experiments::{BidiscKind, DecayModel, DEFAULT_WINDOW_END, DEFAULT_WINDOW_START};
use compdiff::series::{parse_symbol, Symbol};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "COMPDIFF_OUT";
pub const DEFAULT_OUT: &str = "compdiff-out";
pub const DEFAULT_N: usize = 1024;

#[derive(Parser, Debug)]
#[command(name = "compdiff", version, about = "Approximation numbers of differences of composition operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Singular values of the truncated `C_φ`.
    Spectrum,
    /// Singular values of `C_φ − C_ψ`.
    DiffSpectrum,
    /// Lower certificate from an interpolating sequence.
    LowerBound,
    /// Upper certificate from a Blaschke product.
    UpperBound,
    /// Squared Hilbert–Schmidt norm of `C_φ − C_ψ`.
    HsNorm,
    /// Singular values of `M_ω C_φ`.
    Weighted,
    /// Split, glued or triangular bidisc experiment.
    Bidisc,
    /// Named end-to-end experiment: smooth, corner or weighted.
    Experiment { name: String },
    /// Fit a decay model to a spectrum CSV.
    Fit,
}

/// Flags shared by every subcommand; each also has a config-file key of the
/// same name.
#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// Flat TOML file with defaults for any flag below.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Validate the configuration and exit.
    #[arg(long, global = true)]
    pub dry_run: bool,
    #[arg(long, global = true)]
    pub symbol: Option<String>,
    #[arg(long, global = true)]
    pub phi: Option<String>,
    #[arg(long, global = true)]
    pub psi: Option<String>,
    #[arg(long, global = true)]
    pub omega: Option<String>,
    /// Truncation size.
    #[arg(long = "N", global = true)]
    pub truncation: Option<usize>,
    /// Index / sequence size for certificates.
    #[arg(short = 'n', long = "n", global = true)]
    pub index: Option<usize>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Fixed radius for the upper certificate; the default grid is searched otherwise.
    #[arg(long, global = true)]
    pub r: Option<f64>,
    /// Fit window `lo,hi`.
    #[arg(long, global = true)]
    pub window: Option<String>,
    /// power, power_log:<q>, stretched, root_exp or root_log.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// pinch or radial.
    #[arg(long, global = true)]
    pub sequence: Option<String>,
    /// split, glued or triangular.
    #[arg(long, global = true)]
    pub kind: Option<String>,
    /// Spectrum CSV for `fit`.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Also build at `2N` and record the trust horizon.
    #[arg(long, global = true)]
    pub horizon: bool,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(untagged)]
enum WindowSpec {
    Pair([usize; 2]),
    Text(String),
    #[default]
    Unset,
}

/// Contents of a config file; keys mirror the flags.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    symbol: Option<String>,
    phi: Option<String>,
    psi: Option<String>,
    omega: Option<String>,
    #[serde(rename = "N")]
    truncation: Option<usize>,
    n: Option<usize>,
    alpha: Option<f64>,
    c: Option<f64>,
    r: Option<f64>,
    #[serde(default)]
    window: WindowSpec,
    model: Option<String>,
    sequence: Option<String>,
    kind: Option<String>,
    csv: Option<PathBuf>,
    horizon: Option<bool>,
    out: Option<PathBuf>,
    threads: Option<usize>,
}

/// Validated configuration of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub symbol: Option<String>,
    pub phi: Option<String>,
    pub psi: Option<String>,
    pub omega: Option<String>,
    #[serde(rename = "N")]
    pub truncation: usize,
    /// True when `N` was given rather than defaulted.
    pub truncation_set: bool,
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    pub r: Option<f64>,
    pub window: (usize, usize),
    /// True when the window was given explicitly rather than defaulted.
    pub window_set: bool,
    pub model: DecayModel,
    pub sequence: String,
    pub kind: Option<BidiscKind>,
    pub csv: Option<PathBuf>,
    pub horizon: bool,
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub dry_run: bool,
}

impl RunConfig {
    pub fn parse_symbol(&self, flag: &str, spec: Option<&String>) -> Result<Symbol, CliError> {
        let spec = spec.ok_or_else(|| CliError::Config(format!("--{flag} is required")))?;
        parse_symbol(spec).map_err(|e| CliError::Config(format!("--{flag}: {e}")))
    }

    pub fn require<T: Copy>(&self, flag: &str, v: Option<T>) -> Result<T, CliError> {
        v.ok_or_else(|| CliError::Config(format!("--{flag} is required")))
    }
}

fn parse_window(text: &str, source: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Config(format!("{source}: window must be `lo,hi`, got `{text}`"));
    let (lo, hi) = text.split_once(',').ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Merges flags over the config file (flags win) and validates the result.
pub fn parse_config(command: Command, flags: Flags) -> Result<RunConfig, CliError> {
    let file = match &flags.config {
        Some(p) => read_file(p)?,
        None => FileConfig::default(),
    };
    let window = match (&flags.window, &file.window) {
        (Some(w), _) => Some(parse_window(w, "--window")?),
        (None, WindowSpec::Pair([lo, hi])) => Some((*lo, *hi)),
        (None, WindowSpec::Text(w)) => Some(parse_window(w, "config key `window`")?),
        (None, WindowSpec::Unset) => None,
    };
    let model_text = flags.model.or(file.model).unwrap_or_else(|| "power".into());
    let model = DecayModel::parse(&model_text)
        .ok_or_else(|| CliError::Config(format!("--model: unknown model `{model_text}`")))?;
    let kind = match flags.kind.or(file.kind) {
        Some(k) => Some(
            BidiscKind::parse(&k).ok_or_else(|| CliError::Config(format!("--kind: unknown kind `{k}`")))?,
        ),
        None => None,
    };
    let out = flags
        .out
        .or(file.out)
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let truncation = flags.truncation.or(file.truncation);
    let cfg = RunConfig {
        command,
        symbol: flags.symbol.or(file.symbol),
        phi: flags.phi.or(file.phi),
        psi: flags.psi.or(file.psi),
        omega: flags.omega.or(file.omega),
        truncation: truncation.unwrap_or(DEFAULT_N),
        truncation_set: truncation.is_some(),
        n: flags.index.or(file.n),
        alpha: flags.alpha.or(file.alpha),
        c: flags.c.or(file.c),
        r: flags.r.or(file.r),
        window: window.unwrap_or((DEFAULT_WINDOW_START, DEFAULT_WINDOW_END)),
        window_set: window.is_some(),
        model,
        sequence: flags.sequence.or(file.sequence).unwrap_or_else(|| "pinch".into()),
        kind,
        csv: flags.csv.or(file.csv),
        horizon: flags.horizon || file.horizon.unwrap_or(false),
        out,
        threads: flags.threads.or(file.threads),
        dry_run: flags.dry_run,
    };
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let positive = |name: &str, ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(CliError::Config(format!("--{name} must be positive")))
        }
    };
    positive("N", cfg.truncation >= 2)?;
    positive("n", cfg.n.map_or(true, |n| n >= 1))?;
    positive("threads", cfg.threads.map_or(true, |t| t >= 1))?;
    positive("c", cfg.c.map_or(true, |c| c > 0.0))?;
    if cfg.alpha.is_some_and(|a| !(a >= 0.0)) {
        return Err(CliError::Config("--alpha must be non-negative".into()));
    }
    if cfg.r.is_some_and(|r| !(r > 0.0 && r < 1.0)) {
        return Err(CliError::Config("--r must lie in (0, 1)".into()));
    }
    let (lo, hi) = cfg.window;
    if lo < 2 || hi <= lo {
        return Err(CliError::Config(format!("--window: need 2 <= lo < hi, got {lo},{hi}")));
    }
    if !matches!(cfg.sequence.as_str(), "pinch" | "radial") {
        return Err(CliError::Config(format!("--sequence: unknown sequence `{}`", cfg.sequence)));
    }
    for (flag, spec) in [("symbol", &cfg.symbol), ("phi", &cfg.phi), ("psi", &cfg.psi), ("omega", &cfg.omega)] {
        if spec.is_some() {
            cfg.parse_symbol(flag, spec.as_ref())?;
        }
    }
    if let Command::Experiment { name } = &cfg.command {
        if !matches!(name.as_str(), "smooth" | "corner" | "weighted") {
            return Err(CliError::Config(format!(
                "unknown experiment `{name}` (expected smooth, corner or weighted)"
            )));
        }
    }
    Ok(())
}
