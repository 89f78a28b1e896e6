//! Physics-level drivers: field sweeps, factorization detection, the exact
//! Ising order parameter, the θ_opt fit, and the cross-strategy spread.
//!
//! Sweeps use [`crate::spinchain::broken_ground_state`] so that ordered
//! phases are represented by symmetry-broken states rather than finite-size
//! cat states; see that function for the policy.

use crate::error::{Error, Result};
use crate::infotheory::{correlation_values, mutual_information};
use crate::measure::{cic_povm, projective, sic_povm, Measurement};
use crate::optimize::{optimize, OptResult, StrategyFamily, StrategySpec};
use crate::rdm::{two_site_rdm, DensityMatrix};
use crate::spinchain::{
    broken_ground_state, expectation_sigma, mid_pair, Axis, ModelSpec, StateVector,
    DEFAULT_DEGENERACY_WINDOW, DEFAULT_TOL,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Named chain models from the phase-diagram study, plus free couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModelKind {
    /// Ferromagnetic Ising chain: Jx = −1, Jy = Jz = 0; critical at h = 1.
    Ising,
    /// Antiferromagnetic xyx chain: Jx = Jz = 1, Jy = 1/4; critical near
    /// h ≈ 3.21 with a factorization point near h ≈ 3.16.
    Xyx,
    /// Antiferromagnetic anisotropic Heisenberg chain: Jx = Jy = 1,
    /// Jz = 1/2; gapless in-plane phase at small fields.
    Xxz,
    Custom { jx: f64, jy: f64, jz: f64 },
}

impl ModelKind {
    pub fn couplings(&self) -> [f64; 3] {
        match self {
            ModelKind::Ising => [-1.0, 0.0, 0.0],
            ModelKind::Xyx => [1.0, 0.25, 1.0],
            ModelKind::Xxz => [1.0, 1.0, 0.5],
            ModelKind::Custom { jx, jy, jz } => [*jx, *jy, *jz],
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ModelKind::Ising => "ising",
            ModelKind::Xyx => "xyx",
            ModelKind::Xxz => "xxz",
            ModelKind::Custom { .. } => "custom",
        }
    }

    /// Default symmetry-breaking bias: 1e-6 for the Z₂-breaking models,
    /// none for the xxz chain.
    pub fn default_hx(&self) -> f64 {
        match self {
            ModelKind::Ising | ModelKind::Xyx => 1e-6,
            ModelKind::Xxz => 0.0,
            ModelKind::Custom { .. } => 0.0,
        }
    }

    pub fn spec(&self, h: f64, hx: f64, sites: usize) -> Result<ModelSpec> {
        let [jx, jy, jz] = self.couplings();
        ModelSpec::new(jx, jy, jz, h, hx, sites)
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ising" => Ok(ModelKind::Ising),
            "xyx" => Ok(ModelKind::Xyx),
            "xxz" => Ok(ModelKind::Xxz),
            other => Err(Error::invalid(format!(
                "unknown model '{other}' (expected ising, xyx or xxz)"
            ))),
        }
    }
}

/// Measurement strategies for sweeps: the three fixed measurements compared
/// without optimization, and the four optimized families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "proj-z")]
    ProjZ,
    #[serde(rename = "sic")]
    Sic,
    #[serde(rename = "cic")]
    Cic,
    #[serde(rename = "proj-rot")]
    ProjRot,
    #[serde(rename = "sic-rot")]
    SicRot,
    #[serde(rename = "cic-rot")]
    CicRot,
    #[serde(rename = "cic-3par")]
    Cic3Par,
}

impl Strategy {
    pub const ALL: [Strategy; 7] = [
        Strategy::ProjZ,
        Strategy::Sic,
        Strategy::Cic,
        Strategy::ProjRot,
        Strategy::SicRot,
        Strategy::CicRot,
        Strategy::Cic3Par,
    ];

    /// The four optimized strategies compared in the spread diagnostics.
    pub const OPTIMIZED: [Strategy; 4] = [
        Strategy::ProjRot,
        Strategy::SicRot,
        Strategy::CicRot,
        Strategy::Cic3Par,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Strategy::ProjZ => "proj-z",
            Strategy::Sic => "sic",
            Strategy::Cic => "cic",
            Strategy::ProjRot => "proj-rot",
            Strategy::SicRot => "sic-rot",
            Strategy::CicRot => "cic-rot",
            Strategy::Cic3Par => "cic-3par",
        }
    }

    /// Optimizer family for the optimized strategies, None for fixed ones.
    pub fn opt_family(&self) -> Option<StrategyFamily> {
        match self {
            Strategy::ProjRot => Some(StrategyFamily::ProjRot),
            Strategy::SicRot => Some(StrategyFamily::SicRot),
            Strategy::CicRot => Some(StrategyFamily::CicRot),
            Strategy::Cic3Par => Some(StrategyFamily::Cic3Par),
            _ => None,
        }
    }

    /// The fixed measurement evaluated for the unoptimized strategies.
    pub fn fixed_measurement(&self, couplings: [f64; 3]) -> Result<Option<Measurement>> {
        Ok(match self {
            Strategy::ProjZ => Some(projective(0.0, 0.0)),
            Strategy::Sic => Some(sic_povm()),
            Strategy::Cic => Some(cic_povm(couplings[0], couplings[1], couplings[2])?),
            _ => None,
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.label() == s)
            .ok_or_else(|| Error::invalid(format!("unknown strategy '{s}'")))
    }
}

/// Grid resolutions and refinement tolerance handed to the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptSettings {
    pub n_theta: usize,
    pub n_phi: usize,
    pub refine_tol: f64,
}

impl Default for OptSettings {
    fn default() -> Self {
        Self {
            n_theta: crate::optimize::DEFAULT_N_THETA,
            n_phi: crate::optimize::DEFAULT_N_PHI,
            refine_tol: crate::optimize::DEFAULT_REFINE_TOL,
        }
    }
}

impl OptSettings {
    pub fn strategy_spec(
        &self,
        family: StrategyFamily,
        couplings: [f64; 3],
    ) -> Result<StrategySpec> {
        StrategySpec::new(family, couplings, self.n_theta, self.n_phi, self.refine_tol)
    }
}

/// Scalar results of one sweep row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowValues {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub mutual: f64,
    pub s_c: f64,
    pub classical: f64,
    pub discord: f64,
    pub c_max: f64,
    pub theta_opt: f64,
    pub phi_opt: f64,
    pub n_optima: usize,
    pub flat_theta: bool,
    pub flat_phi: bool,
    pub sx_mid: f64,
    pub sz_mid: f64,
}

/// One (h, r, strategy) entry of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub model: String,
    pub sites: usize,
    pub h: f64,
    pub hx: f64,
    pub r: usize,
    pub strategy: Strategy,
    pub values: Option<RowValues>,
    /// Full optimizer output (optimized strategies only; dropped in CSV).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub opt: Option<OptResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

pub const CSV_HEADER: &str = "model,L,h,hx,r,strategy,S_A,S_B,S_AB,I,S_C,C,Q,C_max,theta_opt,phi_opt,n_optima,flat_theta,flat_phi,sx_mid,sz_mid";

fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

impl SweepRow {
    /// Flat CSV encoding: floats in decimal scientific with 12 significant
    /// digits, booleans as 0/1. Error rows carry NaN values.
    pub fn to_csv_line(&self) -> String {
        let nan = f64::NAN;
        let v = self.values.clone().unwrap_or(RowValues {
            s_a: nan,
            s_b: nan,
            s_ab: nan,
            mutual: nan,
            s_c: nan,
            classical: nan,
            discord: nan,
            c_max: nan,
            theta_opt: nan,
            phi_opt: nan,
            n_optima: 0,
            flat_theta: false,
            flat_phi: false,
            sx_mid: nan,
            sz_mid: nan,
        });
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.model,
            self.sites,
            fmt(self.h),
            fmt(self.hx),
            self.r,
            self.strategy.label(),
            fmt(v.s_a),
            fmt(v.s_b),
            fmt(v.s_ab),
            fmt(v.mutual),
            fmt(v.s_c),
            fmt(v.classical),
            fmt(v.discord),
            fmt(v.c_max),
            fmt(v.theta_opt),
            fmt(v.phi_opt),
            v.n_optima,
            u8::from(v.flat_theta),
            u8::from(v.flat_phi),
            fmt(v.sx_mid),
            fmt(v.sz_mid),
        )
    }

    /// Parses one CSV line produced by [`Self::to_csv_line`].
    pub fn from_csv_line(line: &str) -> Result<SweepRow> {
        let parts: Vec<&str> = line.trim_end().split(',').collect();
        if parts.len() != 21 {
            return Err(Error::invalid(format!(
                "expected 21 CSV fields, got {}",
                parts.len()
            )));
        }
        let f = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad float '{s}'")))
        };
        let u = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad integer '{s}'")))
        };
        let b = |s: &str| -> Result<bool> {
            match s {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(Error::invalid(format!("bad boolean '{other}'"))),
            }
        };
        let values = RowValues {
            s_a: f(parts[6])?,
            s_b: f(parts[7])?,
            s_ab: f(parts[8])?,
            mutual: f(parts[9])?,
            s_c: f(parts[10])?,
            classical: f(parts[11])?,
            discord: f(parts[12])?,
            c_max: f(parts[13])?,
            theta_opt: f(parts[14])?,
            phi_opt: f(parts[15])?,
            n_optima: u(parts[16])?,
            flat_theta: b(parts[17])?,
            flat_phi: b(parts[18])?,
            sx_mid: f(parts[19])?,
            sz_mid: f(parts[20])?,
        };
        Ok(SweepRow {
            model: parts[0].to_string(),
            sites: u(parts[1])?,
            h: f(parts[2])?,
            hx: f(parts[3])?,
            r: u(parts[4])?,
            strategy: parts[5].parse()?,
            values: if values.s_a.is_nan() { None } else { Some(values) },
            opt: None,
            error: None,
        })
    }
}

/// Everything needed to run one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub model: ModelKind,
    pub sites: usize,
    pub hx: f64,
    pub h_values: Vec<f64>,
    pub r_values: Vec<usize>,
    pub strategies: Vec<Strategy>,
    pub opt: OptSettings,
    /// Quasi-degeneracy window for the symmetry-broken-state policy.
    pub window: f64,
    /// Eigensolver residual tolerance.
    pub tol: f64,
}

impl SweepConfig {
    pub fn new(model: ModelKind, sites: usize, hx: f64) -> Self {
        Self {
            model,
            sites,
            hx,
            h_values: vec![],
            r_values: vec![1],
            strategies: vec![Strategy::ProjZ],
            opt: OptSettings::default(),
            window: DEFAULT_DEGENERACY_WINDOW,
            tol: DEFAULT_TOL,
        }
    }
}

/// Evaluates one strategy on a prepared two-qubit state.
fn strategy_row_values(
    rho: &DensityMatrix,
    strategy: Strategy,
    couplings: [f64; 3],
    settings: &OptSettings,
    sx_mid: f64,
    sz_mid: f64,
) -> Result<(RowValues, Option<OptResult>)> {
    if let Some(m) = strategy.fixed_measurement(couplings)? {
        let vals = correlation_values(rho, &m)?;
        return Ok((
            RowValues {
                s_a: vals.s_a,
                s_b: vals.s_b,
                s_ab: vals.s_ab,
                mutual: vals.mutual,
                s_c: vals.conditional,
                classical: vals.classical,
                discord: vals.discord,
                c_max: vals.classical,
                theta_opt: 0.0,
                phi_opt: 0.0,
                n_optima: 1,
                flat_theta: false,
                flat_phi: false,
                sx_mid,
                sz_mid,
            },
            None,
        ));
    }
    let family = strategy.opt_family().expect("optimized strategy");
    let spec = settings.strategy_spec(family, couplings)?;
    let opt = optimize(rho, &spec)?;
    let best = opt
        .optima
        .first()
        .ok_or_else(|| Error::InvalidState("optimizer returned no optima".into()))?;
    let vals = correlation_values(rho, &best.measurement)?;
    let row = RowValues {
        s_a: vals.s_a,
        s_b: vals.s_b,
        s_ab: vals.s_ab,
        mutual: vals.mutual,
        s_c: vals.conditional,
        classical: vals.classical,
        discord: vals.discord,
        c_max: opt.c_max,
        theta_opt: best.params[0],
        phi_opt: best.params[1],
        n_optima: opt.optima.len(),
        flat_theta: opt.is_flat("theta") || opt.is_flat("theta_j"),
        flat_phi: opt.is_flat("phi") || opt.is_flat("phi_j"),
        sx_mid,
        sz_mid,
    };
    Ok((row, Some(opt)))
}

/// Computes a single (model, h, r, strategy) row from scratch.
pub fn evaluate_point(
    model: ModelKind,
    h: f64,
    hx: f64,
    sites: usize,
    r: usize,
    strategy: Strategy,
    settings: &OptSettings,
) -> Result<SweepRow> {
    let spec = model.spec(h, hx, sites)?;
    let (_, state) = broken_ground_state(&spec, DEFAULT_TOL, DEFAULT_DEGENERACY_WINDOW)?;
    let (a, b) = mid_pair(sites, r)?;
    let rho = two_site_rdm(&state, a, b)?;
    let sx = expectation_sigma(&state, a, Axis::X)?;
    let sz = expectation_sigma(&state, a, Axis::Z)?;
    let (values, opt) =
        strategy_row_values(&rho, strategy, model.couplings(), settings, sx, sz)?;
    Ok(SweepRow {
        model: model.tag().to_string(),
        sites,
        h,
        hx,
        r,
        strategy,
        values: Some(values),
        opt,
        error: None,
    })
}

/// Field sweep: one row per (h, r, strategy), h outermost, strategy
/// innermost. Rows for different fields are computed in parallel; the
/// output order and contents do not depend on the thread count. Failures
/// are recorded in-row and the sweep continues.
pub fn sweep(cfg: &SweepConfig) -> Vec<SweepRow> {
    let rows_for_h = |&h: &f64| -> Vec<SweepRow> {
        let mut rows = Vec::with_capacity(cfg.r_values.len() * cfg.strategies.len());
        let make_row = |r: usize, strategy: Strategy| SweepRow {
            model: cfg.model.tag().to_string(),
            sites: cfg.sites,
            h,
            hx: cfg.hx,
            r,
            strategy,
            values: None,
            opt: None,
            error: None,
        };
        let prepared = cfg.model.spec(h, cfg.hx, cfg.sites).and_then(|spec| {
            let (_, state) = broken_ground_state(&spec, cfg.tol, cfg.window)?;
            Ok(state)
        });
        let state: StateVector = match prepared {
            Ok(s) => s,
            Err(e) => {
                for &r in &cfg.r_values {
                    for &strategy in &cfg.strategies {
                        let mut row = make_row(r, strategy);
                        row.error = Some(e.to_string());
                        rows.push(row);
                    }
                }
                return rows;
            }
        };
        for &r in &cfg.r_values {
            let pair = mid_pair(cfg.sites, r).and_then(|(a, b)| {
                let rho = two_site_rdm(&state, a, b)?;
                let sx = expectation_sigma(&state, a, Axis::X)?;
                let sz = expectation_sigma(&state, a, Axis::Z)?;
                Ok((rho, sx, sz))
            });
            match pair {
                Ok((rho, sx, sz)) => {
                    for &strategy in &cfg.strategies {
                        let mut row = make_row(r, strategy);
                        match strategy_row_values(
                            &rho,
                            strategy,
                            cfg.model.couplings(),
                            &cfg.opt,
                            sx,
                            sz,
                        ) {
                            Ok((values, opt)) => {
                                row.values = Some(values);
                                row.opt = opt;
                            }
                            Err(e) => row.error = Some(e.to_string()),
                        }
                        rows.push(row);
                    }
                }
                Err(e) => {
                    for &strategy in &cfg.strategies {
                        let mut row = make_row(r, strategy);
                        row.error = Some(e.to_string());
                        rows.push(row);
                    }
                }
            }
        }
        rows
    };
    cfg.h_values
        .par_iter()
        .map(rows_for_h)
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Factorization field h_f = 2√((1−Jz)(Jy−Jz)) of the ferromagnetic-frame
/// XYZ chain, in units |Jx| = 1.
pub fn factorization_field(jy: f64, jz: f64) -> Result<f64> {
    let radicand = (1.0 - jz) * (jy - jz);
    if radicand < 0.0 {
        return Err(Error::NoFactorization(format!(
            "radicand (1-Jz)(Jy-Jz) = {radicand} is negative"
        )));
    }
    Ok(2.0 * radicand.sqrt())
}

/// Result of the numerical factorization search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorizationScan {
    /// Field minimizing the mid-chain mutual information.
    pub h_min: f64,
    /// Mutual information at the minimizer, in bits.
    pub i_min: f64,
    /// Set when the minimum sits at a bracket endpoint (no interior
    /// minimum separated from the edges).
    pub endpoint_minimum: bool,
    /// Ground-state solves spent.
    pub evals: usize,
}

/// Golden-section minimization of the mid-chain pair mutual information
/// I(h) over [h_lo, h_hi], down to a bracket below 1e-4.
pub fn detect_factorization(
    model: ModelKind,
    hx: f64,
    sites: usize,
    r: usize,
    h_lo: f64,
    h_hi: f64,
) -> Result<FactorizationScan> {
    if !(h_lo < h_hi) {
        return Err(Error::invalid(format!(
            "need h_lo < h_hi, got [{h_lo}, {h_hi}]"
        )));
    }
    let (a, b) = mid_pair(sites, r)?;
    let mut evals = 0usize;
    let mut mutual_at = |h: f64| -> Result<f64> {
        evals += 1;
        let spec = model.spec(h, hx, sites)?;
        let (_, state) = broken_ground_state(&spec, DEFAULT_TOL, DEFAULT_DEGENERACY_WINDOW)?;
        mutual_information(&two_site_rdm(&state, a, b)?)
    };

    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let bracket_tol = 1e-4;
    let (mut lo, mut hi) = (h_lo, h_hi);
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = mutual_at(x1)?;
    let mut f2 = mutual_at(x2)?;
    while hi - lo > bracket_tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = mutual_at(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = mutual_at(x2)?;
        }
    }
    let (h_min, i_min) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    let edge = (1e-3 * (h_hi - h_lo)).max(bracket_tol);
    let endpoint_minimum = h_min - h_lo <= edge || h_hi - h_min <= edge;
    Ok(FactorizationScan {
        h_min,
        i_min,
        endpoint_minimum,
        evals,
    })
}

/// Exact transverse-field Ising order parameter ⟨σˣ⟩ = |1−h²|^{1/8} for
/// h < 1, zero in the disordered phase.
pub fn ising_order_parameter_exact(h: f64) -> f64 {
    if h < 1.0 {
        (1.0 - h * h).abs().powf(0.125)
    } else {
        0.0
    }
}

/// Fit of θ_opt(m) = A √(B − m^n) + k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub k: f64,
    pub n: u32,
    /// Root-mean-square misfit.
    pub residual: f64,
}

/// Least squares for (A, B, k): the model is linear in (A, k) at fixed B, so
/// B is scanned on a log grid above max(m^n) and refined by golden section
/// to relative tolerance 1e-8.
pub fn fit_theta_opt(points: &[(f64, f64)], n: u32) -> Result<FitResult> {
    if points.len() < 4 {
        return Err(Error::invalid(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }
    for &(m, _) in points {
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::invalid(format!("order parameter {m} outside [0, 1]")));
        }
    }
    let mn: Vec<f64> = points.iter().map(|&(m, _)| m.powi(n as i32)).collect();
    let theta: Vec<f64> = points.iter().map(|&(_, t)| t).collect();
    let b_floor = mn.iter().fold(f64::NEG_INFINITY, |a, &x| a.max(x));
    let mn_min = mn.iter().fold(f64::INFINITY, |a, &x| a.min(x));
    if b_floor - mn_min < 1e-12 {
        return Err(Error::FitUnderdetermined(
            "all order-parameter values coincide".into(),
        ));
    }

    // Linear solve (A, k) at fixed B; returns (A, k, SSE).
    let solve_at = |b: f64| -> (f64, f64, f64) {
        let nn = points.len() as f64;
        let s: Vec<f64> = mn.iter().map(|&x| (b - x).max(0.0).sqrt()).collect();
        let (mut ss, mut s1, mut st, mut t1) = (0.0, 0.0, 0.0, 0.0);
        for (si, ti) in s.iter().zip(theta.iter()) {
            ss += si * si;
            s1 += si;
            st += si * ti;
            t1 += ti;
        }
        let det = ss * nn - s1 * s1;
        if det.abs() < 1e-14 * (ss * nn).max(1.0) {
            return (0.0, t1 / nn, f64::INFINITY);
        }
        let a = (st * nn - s1 * t1) / det;
        let k = (ss * t1 - s1 * st) / det;
        let sse: f64 = s
            .iter()
            .zip(theta.iter())
            .map(|(si, ti)| {
                let d = a * si + k - ti;
                d * d
            })
            .sum();
        (a, k, sse)
    };

    // Log-spaced scan of t = B − max(m^n) over many decades.
    let scale = b_floor.abs().max(1.0);
    let t_lo: f64 = 1e-12 * scale;
    let t_hi: f64 = 1e2 * scale;
    let steps = 561;
    let ratio = (t_hi / t_lo).powf(1.0 / (steps - 1) as f64);
    let mut best = (f64::INFINITY, t_lo);
    let mut t = t_lo;
    for _ in 0..steps {
        let (_, _, sse) = solve_at(b_floor + t);
        if sse < best.0 {
            best = (sse, t);
        }
        t *= ratio;
    }

    // Golden-section refinement of SSE(t) on the neighboring bracket.
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (best.1 / ratio, best.1 * ratio);
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = solve_at(b_floor + x1).2;
    let mut f2 = solve_at(b_floor + x2).2;
    while (hi - lo) > 1e-8 * hi.max(1e-300) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = solve_at(b_floor + x1).2;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = solve_at(b_floor + x2).2;
        }
    }
    let t_best = if f1 <= f2 { x1 } else { x2 };
    let b = b_floor + t_best;
    let (a, k, sse) = solve_at(b);
    Ok(FitResult {
        a,
        b,
        k,
        n,
        residual: (sse / points.len() as f64).sqrt(),
    })
}

/// Collects (⟨σˣ⟩, θ_opt) fit points from sweep rows of one strategy,
/// excluding half a grid step around each listed critical field.
pub fn theta_fit_points(
    rows: &[SweepRow],
    strategy: Strategy,
    critical_fields: &[f64],
    h_step: f64,
) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|row| row.strategy == strategy)
        .filter(|row| {
            critical_fields
                .iter()
                .all(|hc| (row.h - hc).abs() > 0.5 * h_step)
        })
        .filter_map(|row| {
            row.values
                .as_ref()
                .map(|v| (v.sx_mid.clamp(0.0, 1.0), v.theta_opt))
        })
        .collect()
}

/// Σ² = Σ_M (C_M − ⟨C⟩)² over the optimal correlations of the given
/// strategies.
pub fn strategy_spread(
    rho: &DensityMatrix,
    strategies: &[Strategy],
    couplings: [f64; 3],
    settings: &OptSettings,
) -> Result<f64> {
    if strategies.len() < 2 {
        return Err(Error::invalid("spread requires at least 2 strategies"));
    }
    let mut cs = Vec::with_capacity(strategies.len());
    for &s in strategies {
        let c = if let Some(m) = s.fixed_measurement(couplings)? {
            correlation_values(rho, &m)?.classical
        } else {
            let spec = settings.strategy_spec(s.opt_family().expect("optimized"), couplings)?;
            optimize(rho, &spec)?.c_max
        };
        cs.push(c);
    }
    let mean = cs.iter().sum::<f64>() / cs.len() as f64;
    Ok(cs.iter().map(|c| (c - mean) * (c - mean)).sum())
}
