//! Command-line driver: sweeps, point evaluations, measurement
//! optimization, factorization search and order-parameter fits.
//!
//! Exit codes: 0 success, 1 compute failure (failing row identified on
//! stderr), 2 configuration errors.

mod config;

use clap::{Parser, Subcommand};
use config::{CommonArgs, OutputFormat, Resolved};
use optcorr_core::analysis::{
    self, detect_factorization, evaluate_point, fit_theta_opt, sweep, theta_fit_points,
    Strategy, SweepConfig, SweepRow,
};
use std::io::Write;

#[derive(Parser)]
#[command(
    name = "optcorr",
    about = "Correlations extractable from spin-chain ground states under local measurements",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Field sweep: one output row per (h, r, strategy).
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Field grid lo:hi:count (inclusive endpoints).
        #[arg(long)]
        h: Option<String>,
        /// Comma-separated site separations.
        #[arg(long)]
        r: Option<String>,
        /// Comma-separated strategies (proj-z, sic, cic, proj-rot, sic-rot,
        /// cic-rot, cic-3par).
        #[arg(long)]
        strategies: Option<String>,
    },
    /// Single (model, h, r, strategy) evaluation.
    Point {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Full optimizer output (all optima, flatness, evaluation count) for
    /// one state and strategy, as a JSON document.
    Optimize {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Locate the field minimizing the mid-chain mutual information.
    Factorize {
        #[command(flatten)]
        common: CommonArgs,
        /// Search bracket lo:hi.
        #[arg(long)]
        bracket: String,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
    /// Fit theta_opt = A*sqrt(B - m^n) + k to rows of a sweep CSV.
    Fit {
        /// Input CSV produced by the sweep subcommand.
        #[arg(long)]
        input: String,
        /// Strategy whose rows are fitted.
        #[arg(long, default_value = "proj-rot")]
        strategy: String,
        /// Fixed exponent n.
        #[arg(long, default_value_t = 8)]
        exponent: u32,
        /// Comma-separated critical fields to exclude.
        #[arg(long)]
        exclude: Option<String>,
        /// Field-grid step defining the half-step exclusion window.
        #[arg(long, default_value_t = 0.05)]
        h_step: f64,
        /// Output path, or '-' for standard output.
        #[arg(long, short = 'o')]
        output: Option<String>,
    },
}

fn main() {
    init_thread_pool();
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

/// Honors OPTCORR_THREADS for the data-parallel sweep evaluation.
fn init_thread_pool() {
    if let Ok(n) = std::env::var("OPTCORR_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(AppError::Config(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(AppError::Compute(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

enum AppError {
    Config(String),
    Compute(String),
}

fn cfg_err(msg: impl Into<String>) -> AppError {
    AppError::Config(msg.into())
}

fn dispatch(cli: Cli) -> Result<i32, AppError> {
    match cli.command {
        Command::Sweep {
            common,
            h,
            r,
            strategies,
        } => run_sweep(&common, h, r, strategies),
        Command::Point {
            common,
            h,
            r,
            strategy,
        } => run_point(&common, h, r, strategy, false),
        Command::Optimize {
            common,
            h,
            r,
            strategy,
        } => run_point(&common, h, r, strategy, true),
        Command::Factorize { common, bracket, r } => run_factorize(&common, &bracket, r),
        Command::Fit {
            input,
            strategy,
            exponent,
            exclude,
            h_step,
            output,
        } => run_fit(&input, &strategy, exponent, exclude, h_step, output),
    }
}

/// Writes `text` to the resolved output target (file or stdout).
fn emit(output: Option<&str>, text: &str) -> Result<(), AppError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| AppError::Compute(format!("cannot write '{path}': {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| AppError::Compute(format!("cannot write to stdout: {e}")))
        }
    }
}

fn render_rows(rows: &[SweepRow], format: OutputFormat) -> Result<String, AppError> {
    let mut text = String::new();
    match format {
        OutputFormat::Csv => {
            text.push_str(analysis::CSV_HEADER);
            text.push('\n');
            for row in rows {
                text.push_str(&row.to_csv_line());
                text.push('\n');
            }
        }
        OutputFormat::JsonLines => {
            for row in rows {
                let line = serde_json::to_string(row)
                    .map_err(|e| AppError::Compute(format!("serialization failed: {e}")))?;
                text.push_str(&line);
                text.push('\n');
            }
        }
    }
    Ok(text)
}

/// Reports failing rows on stderr; exit 1 when any row failed.
fn finish_rows(rows: &[SweepRow]) -> i32 {
    let failures: Vec<&SweepRow> = rows.iter().filter(|row| row.error.is_some()).collect();
    if failures.is_empty() {
        return 0;
    }
    for row in &failures {
        eprintln!(
            "error: row model={} h={} r={} strategy={}: {}",
            row.model,
            row.h,
            row.r,
            row.strategy.label(),
            row.error.as_deref().unwrap_or("unknown")
        );
    }
    1
}

fn run_sweep(
    common: &CommonArgs,
    h: Option<String>,
    r: Option<String>,
    strategies: Option<String>,
) -> Result<i32, AppError> {
    let resolved: Resolved = config::resolve(common).map_err(cfg_err)?;
    let h_spec = h
        .or_else(|| resolved.file.h.clone())
        .ok_or_else(|| cfg_err("sweep requires --h lo:hi:count"))?;
    let h_values = config::parse_grid(&h_spec).map_err(cfg_err)?;
    let r_values = match r.or_else(|| resolved.file.r.clone()) {
        Some(s) => config::parse_r_list(&s).map_err(cfg_err)?,
        None => vec![1],
    };
    let strategies = match strategies.or_else(|| resolved.file.strategies.clone()) {
        Some(s) => config::parse_strategies(&s).map_err(cfg_err)?,
        None => vec![Strategy::ProjZ],
    };
    if h_values.is_empty() || r_values.is_empty() || strategies.is_empty() {
        return Err(cfg_err("empty grid, separation list or strategy list"));
    }

    let mut cfg = SweepConfig::new(resolved.model, resolved.sites, resolved.hx);
    cfg.h_values = h_values;
    cfg.r_values = r_values;
    cfg.strategies = strategies;
    cfg.opt = resolved.opt;
    let rows = sweep(&cfg);
    let text = render_rows(&rows, resolved.format)?;
    emit(resolved.output.as_deref(), &text)?;
    Ok(finish_rows(&rows))
}

fn parse_strategy_arg(
    strategy: Option<String>,
    resolved: &Resolved,
) -> Result<Strategy, AppError> {
    let name = strategy
        .or_else(|| resolved.file.strategy.clone())
        .ok_or_else(|| cfg_err("missing --strategy"))?;
    name.parse::<Strategy>().map_err(|e| cfg_err(e.to_string()))
}

fn run_point(
    common: &CommonArgs,
    h: f64,
    r: usize,
    strategy: Option<String>,
    full_opt: bool,
) -> Result<i32, AppError> {
    let resolved = config::resolve(common).map_err(cfg_err)?;
    let strategy = parse_strategy_arg(strategy, &resolved)?;
    let row = evaluate_point(
        resolved.model,
        h,
        resolved.hx,
        resolved.sites,
        r,
        strategy,
        &resolved.opt,
    )
    .map_err(|e| {
        AppError::Compute(format!(
            "row model={} h={h} r={r} strategy={}: {e}",
            resolved.model.tag(),
            strategy.label()
        ))
    })?;

    if full_opt {
        let record = serde_json::json!({
            "model": resolved.model.tag(),
            "L": resolved.sites,
            "h": h,
            "hx": resolved.hx,
            "r": r,
            "strategy": strategy.label(),
            "values": row.values,
            "optimization": row.opt,
        });
        let text = serde_json::to_string_pretty(&record)
            .map_err(|e| AppError::Compute(e.to_string()))?;
        emit(resolved.output.as_deref(), &format!("{text}\n"))?;
        return Ok(0);
    }
    let text = render_rows(std::slice::from_ref(&row), resolved.format)?;
    emit(resolved.output.as_deref(), &text)?;
    Ok(finish_rows(std::slice::from_ref(&row)))
}

fn run_factorize(common: &CommonArgs, bracket: &str, r: usize) -> Result<i32, AppError> {
    let resolved = config::resolve(common).map_err(cfg_err)?;
    let (lo, hi) = config::parse_bracket(bracket).map_err(cfg_err)?;
    let scan = detect_factorization(resolved.model, resolved.hx, resolved.sites, r, lo, hi)
        .map_err(|e| AppError::Compute(e.to_string()))?;
    let record = serde_json::json!({
        "model": resolved.model.tag(),
        "L": resolved.sites,
        "hx": resolved.hx,
        "r": r,
        "bracket": [lo, hi],
        "h_min": scan.h_min,
        "i_min": scan.i_min,
        "endpoint_minimum": scan.endpoint_minimum,
        "evals": scan.evals,
    });
    let text =
        serde_json::to_string_pretty(&record).map_err(|e| AppError::Compute(e.to_string()))?;
    emit(resolved.output.as_deref(), &format!("{text}\n"))?;
    Ok(0)
}

fn run_fit(
    input: &str,
    strategy: &str,
    exponent: u32,
    exclude: Option<String>,
    h_step: f64,
    output: Option<String>,
) -> Result<i32, AppError> {
    let strategy: Strategy = strategy
        .parse()
        .map_err(|e: optcorr_core::Error| cfg_err(e.to_string()))?;
    let exclude = match exclude {
        Some(s) => config::parse_f64_list(&s).map_err(cfg_err)?,
        None => vec![],
    };
    let text = std::fs::read_to_string(input)
        .map_err(|e| cfg_err(format!("cannot read '{input}': {e}")))?;
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if k == 0 && line.starts_with("model,") {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        rows.push(
            SweepRow::from_csv_line(line)
                .map_err(|e| cfg_err(format!("{input}:{}: {e}", k + 1)))?,
        );
    }
    let points = theta_fit_points(&rows, strategy, &exclude, h_step);
    let fit =
        fit_theta_opt(&points, exponent).map_err(|e| AppError::Compute(e.to_string()))?;
    let record = serde_json::json!({
        "input": input,
        "strategy": strategy.label(),
        "n_points": points.len(),
        "a": fit.a,
        "b": fit.b,
        "k": fit.k,
        "n": fit.n,
        "residual": fit.residual,
    });
    let text =
        serde_json::to_string_pretty(&record).map_err(|e| AppError::Compute(e.to_string()))?;
    emit(output.as_deref().filter(|p| *p != "-"), &format!("{text}\n"))?;
    Ok(0)
}
