//! Flag/file configuration merging and small grammar parsers.
//!
//! Precedence: command-line flag > config-file key > built-in default.
//! The config file is TOML with keys mirroring the flags (snake_case).

use optcorr_core::analysis::{ModelKind, OptSettings, Strategy};
use serde::Deserialize;

/// Shared options accepted by every subcommand.
#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// Named model: ising, xyx or xxz. Omit for custom couplings.
    #[arg(long)]
    pub model: Option<String>,
    /// Custom coupling Jx (requires omitting --model).
    #[arg(long)]
    pub jx: Option<f64>,
    /// Custom coupling Jy.
    #[arg(long)]
    pub jy: Option<f64>,
    /// Custom coupling Jz.
    #[arg(long)]
    pub jz: Option<f64>,
    /// Chain length L.
    #[arg(long, short = 'L')]
    pub length: Option<usize>,
    /// Symmetry-breaking bias field (default: 1e-6 for ising/xyx, 0 else).
    #[arg(long)]
    pub hx: Option<f64>,
    /// Polar grid resolution for the optimizer.
    #[arg(long)]
    pub n_theta: Option<usize>,
    /// Azimuthal grid resolution for the optimizer.
    #[arg(long)]
    pub n_phi: Option<usize>,
    /// Output path, or '-' for standard output.
    #[arg(long, short = 'o')]
    pub output: Option<String>,
    /// Output format: csv or jsonl.
    #[arg(long)]
    pub format: Option<String>,
    /// TOML config file supplying defaults for any of the above.
    #[arg(long)]
    pub config: Option<String>,
}

/// Config-file counterpart of the flags (all optional).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub jx: Option<f64>,
    pub jy: Option<f64>,
    pub jz: Option<f64>,
    pub length: Option<usize>,
    pub hx: Option<f64>,
    pub h: Option<String>,
    pub r: Option<String>,
    pub strategies: Option<String>,
    pub strategy: Option<String>,
    pub n_theta: Option<usize>,
    pub n_phi: Option<usize>,
    pub output: Option<String>,
    pub format: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    JsonLines,
}

/// Fully resolved run parameters.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub model: ModelKind,
    pub sites: usize,
    pub hx: f64,
    pub opt: OptSettings,
    pub output: Option<String>,
    pub format: OutputFormat,
    pub file: FileConfig,
}

pub const DEFAULT_SITES: usize = 14;

pub fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "jsonl" | "json-lines" => Ok(OutputFormat::JsonLines),
        other => Err(format!("unknown format '{other}' (expected csv or jsonl)")),
    }
}

/// Inclusive grid `lo:hi:count`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid '{s}' must have the form lo:hi:count"));
    }
    let lo: f64 = parts[0].parse().map_err(|_| format!("bad number '{}'", parts[0]))?;
    let hi: f64 = parts[1].parse().map_err(|_| format!("bad number '{}'", parts[1]))?;
    let count: usize = parts[2].parse().map_err(|_| format!("bad count '{}'", parts[2]))?;
    if count == 0 {
        return Err("grid count must be at least 1".into());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect())
}

/// Bracket `lo:hi`.
pub fn parse_bracket(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("bracket '{s}' must have the form lo:hi"));
    }
    let lo: f64 = parts[0].parse().map_err(|_| format!("bad number '{}'", parts[0]))?;
    let hi: f64 = parts[1].parse().map_err(|_| format!("bad number '{}'", parts[1]))?;
    Ok((lo, hi))
}

/// Comma-separated strategy labels.
pub fn parse_strategies(s: &str) -> Result<Vec<Strategy>, String> {
    s.split(',')
        .map(|tok| tok.trim().parse::<Strategy>().map_err(|e| e.to_string()))
        .collect()
}

/// Comma-separated separations.
pub fn parse_r_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad separation '{tok}'"))
        })
        .collect()
}

/// Comma-separated field values.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number '{tok}'"))
        })
        .collect()
}

pub fn load_file_config(path: Option<&str>) -> Result<FileConfig, String> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file '{path}': {e}"))?;
    toml::from_str(&text).map_err(|e| format!("cannot parse config file '{path}': {e}"))
}

/// Resolves model, length, bias, optimizer settings and output options from
/// flags and the config file.
pub fn resolve(args: &CommonArgs) -> Result<Resolved, String> {
    let file = load_file_config(args.config.as_deref())?;

    let model_name = args.model.clone().or_else(|| file.model.clone());
    let jx = args.jx.or(file.jx);
    let jy = args.jy.or(file.jy);
    let jz = args.jz.or(file.jz);
    let model = match (model_name, jx, jy, jz) {
        (Some(name), None, None, None) => {
            name.parse::<ModelKind>().map_err(|e| e.to_string())?
        }
        (Some(_), _, _, _) => {
            return Err("give either --model or explicit couplings, not both".into())
        }
        (None, None, None, None) => {
            return Err("no model: pass --model or --jx/--jy/--jz".into())
        }
        (None, jx, jy, jz) => ModelKind::Custom {
            jx: jx.unwrap_or(0.0),
            jy: jy.unwrap_or(0.0),
            jz: jz.unwrap_or(0.0),
        },
    };

    let sites = args.length.or(file.length).unwrap_or(DEFAULT_SITES);
    let hx = args.hx.or(file.hx).unwrap_or_else(|| model.default_hx());

    let mut opt = OptSettings::default();
    if let Some(n) = args.n_theta.or(file.n_theta) {
        opt.n_theta = n;
    }
    if let Some(n) = args.n_phi.or(file.n_phi) {
        opt.n_phi = n;
    }

    let format = match args.format.as_deref().or(file.format.as_deref()) {
        Some(s) => parse_format(s)?,
        None => OutputFormat::Csv,
    };
    let output = args
        .output
        .clone()
        .or_else(|| file.output.clone())
        .filter(|p| p != "-");

    Ok(Resolved {
        model,
        sites,
        hx,
        opt,
        output,
        format,
        file,
    })
}
