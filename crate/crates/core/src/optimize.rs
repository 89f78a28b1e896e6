//! Maximization of classical correlations over measurement strategies.
//!
//! Strategies: the fixed z-projective measurement, rigid rotations of the
//! projective/SIC/CIC measurements over (θ, φ) ∈ [0, π] × [0, 2π), and the
//! three-parameter CIC family parameterized by the unit coupling direction
//! (the overall coupling scale drops out of the POVM).
//!
//! The search is a coarse grid scan followed by Nelder–Mead refinement from
//! every grid point within 1e-6 of the grid maximum. Refined optima are
//! deduplicated by comparing the measurements themselves (element sets up to
//! permutation), which absorbs the antipodal equivalence
//! (θ, φ) ≡ (π−θ, φ+π) shared by all families in scope. Everything is
//! sequential and deterministic: identical inputs give identical results
//! bit for bit.

use crate::error::{Error, Result};
use crate::infotheory::{conditional_entropy_raw, von_neumann_entropy};
use crate::measure::{
    bloch_vector, canonical_angles, cic_povm, projective, rotate, sic_povm, Measurement,
};
use crate::rdm::DensityMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Grid points with C within this distance of the grid maximum seed the
/// local refinement.
const REFINE_WINDOW: f64 = 1e-6;

/// Parameter-space distance below which two optima are the same point.
const DEDUP_ANGLE: f64 = 1e-4;

/// Variation threshold for flagging a scanned parameter line as flat.
const FLAT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrategyFamily {
    ProjZ,
    ProjRot,
    SicRot,
    CicRot,
    Cic3Par,
}

impl StrategyFamily {
    pub fn label(&self) -> &'static str {
        match self {
            StrategyFamily::ProjZ => "proj-z",
            StrategyFamily::ProjRot => "proj-rot",
            StrategyFamily::SicRot => "sic-rot",
            StrategyFamily::CicRot => "cic-rot",
            StrategyFamily::Cic3Par => "cic-3par",
        }
    }
}

/// Family, coupling seed and search settings for one optimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySpec {
    pub family: StrategyFamily,
    /// Couplings seeding the CIC families (ignored by the others).
    pub couplings: [f64; 3],
    pub n_theta: usize,
    pub n_phi: usize,
    pub refine_tol: f64,
}

pub const DEFAULT_N_THETA: usize = 61;
pub const DEFAULT_N_PHI: usize = 121;
pub const DEFAULT_REFINE_TOL: f64 = 1e-8;

impl StrategySpec {
    /// Grid resolutions below (13, 25) provably miss known optima; reject.
    pub fn new(
        family: StrategyFamily,
        couplings: [f64; 3],
        n_theta: usize,
        n_phi: usize,
        refine_tol: f64,
    ) -> Result<Self> {
        if n_theta < 13 || n_phi < 25 {
            return Err(Error::invalid(format!(
                "grid must be at least 13x25, got {n_theta}x{n_phi}"
            )));
        }
        if !(refine_tol > 0.0) {
            return Err(Error::invalid("refinement tolerance must be > 0"));
        }
        Ok(Self {
            family,
            couplings,
            n_theta,
            n_phi,
            refine_tol,
        })
    }

    pub fn with_defaults(family: StrategyFamily, couplings: [f64; 3]) -> Self {
        Self {
            family,
            couplings,
            n_theta: DEFAULT_N_THETA,
            n_phi: DEFAULT_N_PHI,
            refine_tol: DEFAULT_REFINE_TOL,
        }
    }
}

/// One maximizing parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    /// (θ, φ) rotation angles, or (θ_J, φ_J) for the coupling direction.
    pub params: [f64; 2],
    /// Unit coupling direction for the three-parameter CIC family.
    pub direction: Option<[f64; 3]>,
    /// Classical correlations at this point, in bits.
    pub c: f64,
    pub measurement: Measurement,
}

/// Flatness diagnostics for one scanned parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatDirection {
    pub name: String,
    /// max − min of C along the grid line through the maximum.
    pub variation: f64,
    pub is_flat: bool,
}

/// Maximal classical correlations with every maximizing point found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub family: StrategyFamily,
    pub c_max: f64,
    pub optima: Vec<Optimum>,
    pub flat: Vec<FlatDirection>,
    pub n_evals: u64,
}

impl OptResult {
    /// Convenience accessor: flatness flag by parameter name.
    pub fn is_flat(&self, name: &str) -> bool {
        self.flat.iter().any(|f| f.name == name && f.is_flat)
    }
}

/// Normalized coupling direction (Jx, Jy, Jz) / ‖J‖.
pub fn local_operator_axis(jx: f64, jy: f64, jz: f64) -> Result<[f64; 3]> {
    let norm = (jx * jx + jy * jy + jz * jz).sqrt();
    if norm < 1e-300 {
        return Err(Error::invalid("zero coupling vector has no axis"));
    }
    Ok([jx / norm, jy / norm, jz / norm])
}

struct Evaluator<'a> {
    rho: [Complex64; 16],
    s_a: f64,
    spec: &'a StrategySpec,
    base: Option<Measurement>,
    n_evals: u64,
}

impl<'a> Evaluator<'a> {
    fn new(rho_ab: &DensityMatrix, spec: &'a StrategySpec) -> Result<Self> {
        if rho_ab.dim() != 4 {
            return Err(Error::invalid("optimization requires a 4x4 state"));
        }
        let s_a = von_neumann_entropy(&rho_ab.marginal_a()?)?;
        let mut rho = [Complex64::ZERO; 16];
        for i in 0..4 {
            for j in 0..4 {
                rho[i * 4 + j] = rho_ab.entry(i, j);
            }
        }
        let base = match spec.family {
            StrategyFamily::SicRot => Some(sic_povm()),
            StrategyFamily::CicRot => {
                let [jx, jy, jz] = spec.couplings;
                Some(cic_povm(jx, jy, jz).map_err(|_| {
                    Error::invalid("cic-rot strategy requires a nonzero coupling seed")
                })?)
            }
            _ => None,
        };
        Ok(Self {
            rho,
            s_a,
            spec,
            base,
            n_evals: 0,
        })
    }

    fn measurement(&self, p: [f64; 2]) -> Measurement {
        match self.spec.family {
            StrategyFamily::ProjZ => projective(0.0, 0.0),
            StrategyFamily::ProjRot => projective(p[0], p[1]),
            StrategyFamily::SicRot | StrategyFamily::CicRot => {
                rotate(self.base.as_ref().expect("base measurement"), p[0], p[1])
            }
            StrategyFamily::Cic3Par => {
                let d = bloch_vector(p[0], p[1]);
                cic_povm(d[0], d[1], d[2]).expect("unit direction is nonzero")
            }
        }
    }

    fn c_value(&mut self, p: [f64; 2]) -> Result<f64> {
        self.n_evals += 1;
        let m = self.measurement(p);
        Ok(self.s_a - conditional_entropy_raw(&self.rho, &m)?)
    }
}

/// Nelder–Mead maximization in two parameters; returns the best point seen.
fn nelder_mead_max(
    eval: &mut Evaluator,
    x0: [f64; 2],
    step: [f64; 2],
    tol: f64,
) -> Result<([f64; 2], f64)> {
    const MAX_ITER: usize = 300;
    let f = |e: &mut Evaluator, x: [f64; 2]| -> Result<f64> { e.c_value(x) };
    let mut pts = [
        (x0, f(eval, x0)?),
        ([x0[0] + step[0], x0[1]], f(eval, [x0[0] + step[0], x0[1]])?),
        ([x0[0], x0[1] + step[1]], f(eval, [x0[0], x0[1] + step[1]])?),
    ];
    let mut best = pts[0];
    for _ in 0..MAX_ITER {
        // descending by value: pts[0] best (largest), pts[2] worst
        pts.sort_by(|a, b| b.1.total_cmp(&a.1));
        if pts[0].1 > best.1 {
            best = pts[0];
        }
        let size = pts
            .iter()
            .flat_map(|a| {
                pts.iter()
                    .map(move |b| (a.0[0] - b.0[0]).abs().max((a.0[1] - b.0[1]).abs()))
            })
            .fold(0.0f64, f64::max);
        if size < tol {
            break;
        }
        let centroid = [
            0.5 * (pts[0].0[0] + pts[1].0[0]),
            0.5 * (pts[0].0[1] + pts[1].0[1]),
        ];
        let worst = pts[2];
        let reflect = [
            centroid[0] + (centroid[0] - worst.0[0]),
            centroid[1] + (centroid[1] - worst.0[1]),
        ];
        let fr = f(eval, reflect)?;
        if fr > pts[0].1 {
            // try expansion
            let expand = [
                centroid[0] + 2.0 * (centroid[0] - worst.0[0]),
                centroid[1] + 2.0 * (centroid[1] - worst.0[1]),
            ];
            let fe = f(eval, expand)?;
            pts[2] = if fe > fr { (expand, fe) } else { (reflect, fr) };
        } else if fr > pts[1].1 {
            pts[2] = (reflect, fr);
        } else {
            let contract = [
                centroid[0] + 0.5 * (worst.0[0] - centroid[0]),
                centroid[1] + 0.5 * (worst.0[1] - centroid[1]),
            ];
            let fc = f(eval, contract)?;
            if fc > worst.1 {
                pts[2] = (contract, fc);
            } else {
                // shrink toward the best point
                for k in 1..3 {
                    let shrunk = [
                        pts[0].0[0] + 0.5 * (pts[k].0[0] - pts[0].0[0]),
                        pts[0].0[1] + 0.5 * (pts[k].0[1] - pts[0].0[1]),
                    ];
                    pts[k] = (shrunk, f(eval, shrunk)?);
                }
            }
        }
    }
    pts.sort_by(|a, b| b.1.total_cmp(&a.1));
    if pts[0].1 > best.1 {
        best = pts[0];
    }
    Ok(best)
}

/// Canonical parameter form per family. For the projective family the
/// antipodal pair (θ, φ) ≡ (π−θ, φ+π) is collapsed onto the representative
/// with cos φ ≥ 0; centering the kept branch on φ = 0 keeps a continuously
/// varying optimum (whose φ sits at 0 or π) on one branch instead of
/// flipping between the two by rounding noise.
fn canonicalize(family: StrategyFamily, p: [f64; 2]) -> [f64; 2] {
    let (t, ph) = canonical_angles(p[0], p[1]);
    if family == StrategyFamily::ProjZ {
        return [0.0, 0.0];
    }
    if family == StrategyFamily::ProjRot {
        if t.sin().abs() < 1e-9 {
            return [0.0, 0.0];
        }
        if ph.cos() < 0.0 {
            let (tc, pc) = canonical_angles(PI - t, ph - PI);
            return [tc, pc];
        }
    }
    [t, ph]
}

fn axis_angle(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
    dot.acos()
}

/// Distance between two measurements of the same family: the smallest, over
/// element permutations, of the largest axis misalignment. Absorbs every
/// relabeling symmetry of the families in scope.
fn measurement_distance(a: &Measurement, b: &Measurement) -> f64 {
    let n = a.elements.len();
    if n != b.elements.len() {
        return f64::INFINITY;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    // n is 2 or 4; enumerate permutations by repeated next_permutation
    loop {
        let mut worst = 0.0f64;
        for (i, &p) in perm.iter().enumerate() {
            if (a.elements[i].weight - b.elements[p].weight).abs() > 1e-9 {
                worst = f64::INFINITY;
                break;
            }
            worst = worst.max(axis_angle(a.elements[i].axis, b.elements[p].axis));
            if worst >= best {
                break;
            }
        }
        best = best.min(worst);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Maximizes C over the strategy family of `spec`.
pub fn optimize(rho_ab: &DensityMatrix, spec: &StrategySpec) -> Result<OptResult> {
    let mut eval = Evaluator::new(rho_ab, spec)?;

    if spec.family == StrategyFamily::ProjZ {
        let c = eval.c_value([0.0, 0.0])?;
        let m = eval.measurement([0.0, 0.0]);
        return Ok(OptResult {
            family: spec.family,
            c_max: c,
            optima: vec![Optimum {
                params: [0.0, 0.0],
                direction: None,
                c,
                measurement: m,
            }],
            flat: vec![],
            n_evals: eval.n_evals,
        });
    }

    let nt = spec.n_theta;
    let np = spec.n_phi;
    let theta_at = |i: usize| PI * i as f64 / (nt - 1) as f64;
    let phi_at = |j: usize| TAU * j as f64 / np as f64;

    // Coarse grid scan; ties keep the first (smallest-index) point.
    let mut grid = vec![0.0f64; nt * np];
    let mut best_idx = 0usize;
    let mut best_c = f64::NEG_INFINITY;
    for i in 0..nt {
        for j in 0..np {
            let c = eval.c_value([theta_at(i), phi_at(j)])?;
            grid[i * np + j] = c;
            if c > best_c {
                best_c = c;
                best_idx = i * np + j;
            }
        }
    }
    let (bi, bj) = (best_idx / np, best_idx % np);

    // Flatness of the grid lines through the maximum.
    let theta_line: Vec<f64> = (0..nt).map(|i| grid[i * np + bj]).collect();
    let phi_line: Vec<f64> = (0..np).map(|j| grid[bi * np + j]).collect();
    let variation = |line: &[f64]| -> f64 {
        let lo = line.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let hi = line.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        hi - lo
    };
    let names: [&str; 2] = if spec.family == StrategyFamily::Cic3Par {
        ["theta_j", "phi_j"]
    } else {
        ["theta", "phi"]
    };
    let flat = vec![
        FlatDirection {
            name: names[0].to_string(),
            variation: variation(&theta_line),
            is_flat: variation(&theta_line) < FLAT_TOL,
        },
        FlatDirection {
            name: names[1].to_string(),
            variation: variation(&phi_line),
            is_flat: variation(&phi_line) < FLAT_TOL,
        },
    ];

    // Refine from every grid point close to the maximum.
    let step = [
        0.5 * PI / (nt - 1) as f64,
        0.5 * TAU / np as f64,
    ];
    let mut candidates: Vec<([f64; 2], f64)> = Vec::new();
    for i in 0..nt {
        for j in 0..np {
            if grid[i * np + j] >= best_c - REFINE_WINDOW {
                let (p, c) = nelder_mead_max(
                    &mut eval,
                    [theta_at(i), phi_at(j)],
                    step,
                    spec.refine_tol,
                )?;
                candidates.push((canonicalize(spec.family, p), c));
            }
        }
    }

    let c_max = candidates
        .iter()
        .map(|(_, c)| *c)
        .fold(best_c, f64::max);

    // Deduplicate via the measurements themselves, with a cheap axis-angle
    // prefilter away from the poles.
    struct Rep {
        params: [f64; 2],
        c: f64,
        measurement: Measurement,
        naxis: [f64; 3],
    }
    let mut reps: Vec<Rep> = Vec::new();
    for (p, c) in candidates {
        if c < c_max - spec.refine_tol {
            continue;
        }
        let m = eval.measurement(p);
        let naxis = bloch_vector(p[0], p[1]);
        let mut merged = false;
        for rep in reps.iter_mut() {
            let dn = axis_angle(naxis, rep.naxis)
                .min(axis_angle(naxis, [-rep.naxis[0], -rep.naxis[1], -rep.naxis[2]]));
            let near_pole = p[0].sin().abs() < 1e-3 || rep.params[0].sin().abs() < 1e-3;
            if dn > 10.0 * DEDUP_ANGLE && !near_pole {
                continue;
            }
            if measurement_distance(&m, &rep.measurement) < DEDUP_ANGLE {
                if c > rep.c {
                    rep.params = p;
                    rep.c = c;
                    rep.measurement = m.clone();
                    rep.naxis = naxis;
                }
                merged = true;
                break;
            }
        }
        if !merged {
            reps.push(Rep {
                params: p,
                c,
                measurement: m,
                naxis,
            });
        }
    }

    let optima: Vec<Optimum> = reps
        .into_iter()
        .map(|r| Optimum {
            params: r.params,
            direction: (spec.family == StrategyFamily::Cic3Par)
                .then(|| bloch_vector(r.params[0], r.params[1])),
            c: r.c,
            measurement: r.measurement,
        })
        .collect();

    Ok(OptResult {
        family: spec.family,
        c_max,
        optima,
        flat,
        n_evals: eval.n_evals,
    })
}

/// Runs [`optimize`] for every strategy in order.
pub fn optimize_all(rho_ab: &DensityMatrix, specs: &[StrategySpec]) -> Result<Vec<OptResult>> {
    specs.iter().map(|s| optimize(rho_ab, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infotheory::classical_correlations_given;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> DensityMatrix {
        DensityMatrix::pure(&[c64(1.0), c64(0.0), c64(0.0), c64(1.0)]).unwrap()
    }

    fn polarized_product() -> DensityMatrix {
        DensityMatrix::pure(&[c64(1.0), c64(0.0), c64(0.0), c64(0.0)]).unwrap()
    }

    fn classical_mixture() -> DensityMatrix {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        m[(0, 0)] = c64(0.5);
        m[(3, 3)] = c64(0.5);
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn bell_state_proj_rot_is_flat_at_one() {
        let spec = StrategySpec::with_defaults(StrategyFamily::ProjRot, [0.0; 3]);
        let r = optimize(&bell(), &spec).unwrap();
        assert_abs_diff_eq!(r.c_max, 1.0, epsilon = 1e-9);
        assert!(r.is_flat("theta"));
        assert!(r.is_flat("phi"));
    }

    #[test]
    fn product_state_flat_at_zero() {
        for family in [
            StrategyFamily::ProjZ,
            StrategyFamily::ProjRot,
            StrategyFamily::SicRot,
            StrategyFamily::Cic3Par,
        ] {
            let spec = StrategySpec::with_defaults(family, [1.0, 1.0, 1.0]);
            let r = optimize(&polarized_product(), &spec).unwrap();
            assert_abs_diff_eq!(r.c_max, 0.0, epsilon = 1e-9);
            if family != StrategyFamily::ProjZ {
                assert!(r.flat.iter().all(|f| f.is_flat));
            }
        }
    }

    #[test]
    fn classical_mixture_proj_rot_optimum_along_z() {
        let spec = StrategySpec::with_defaults(StrategyFamily::ProjRot, [0.0; 3]);
        let r = optimize(&classical_mixture(), &spec).unwrap();
        assert_abs_diff_eq!(r.c_max, 1.0, epsilon = 1e-9);
        for o in &r.optima {
            // canonical antipodal representative: θ ∈ {0} (or π folded to 0)
            assert!(o.params[0] < 1e-3 || (PI - o.params[0]).abs() < 1e-3);
        }
    }

    #[test]
    fn projective_landscape_antipodal_symmetry() {
        let rho = classical_mixture();
        for (t, p) in [(0.4, 0.9), (1.2, 3.3), (2.0, 5.1)] {
            let a = classical_correlations_given(&rho, &projective(t, p)).unwrap();
            let b =
                classical_correlations_given(&rho, &projective(PI - t, p + PI)).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn local_axis_examples() {
        let a = local_operator_axis(-1.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(a[0], -1.0, epsilon = 1e-15);
        let a = local_operator_axis(1.0, 1.0, 1.0).unwrap();
        let inv = 1.0 / 3f64.sqrt();
        for k in 0..3 {
            assert_abs_diff_eq!(a[k], inv, epsilon = 1e-15);
        }
        assert!(local_operator_axis(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn grid_limits_enforced() {
        assert!(StrategySpec::new(StrategyFamily::ProjRot, [0.0; 3], 12, 121, 1e-8).is_err());
        assert!(StrategySpec::new(StrategyFamily::ProjRot, [0.0; 3], 61, 24, 1e-8).is_err());
        assert!(StrategySpec::new(StrategyFamily::ProjRot, [0.0; 3], 61, 121, 0.0).is_err());
    }

    #[test]
    fn cic_rot_requires_seed() {
        let spec = StrategySpec::with_defaults(StrategyFamily::CicRot, [0.0; 3]);
        assert!(optimize(&bell(), &spec).is_err());
    }

    #[test]
    fn determinism_bit_for_bit() {
        let spec = StrategySpec::with_defaults(StrategyFamily::SicRot, [0.0; 3]);
        let a = optimize(&classical_mixture(), &spec).unwrap();
        let b = optimize(&classical_mixture(), &spec).unwrap();
        assert_eq!(a.c_max.to_bits(), b.c_max.to_bits());
        assert_eq!(a.n_evals, b.n_evals);
        assert_eq!(a.optima.len(), b.optima.len());
        for (x, y) in a.optima.iter().zip(b.optima.iter()) {
            assert_eq!(x.params[0].to_bits(), y.params[0].to_bits());
            assert_eq!(x.params[1].to_bits(), y.params[1].to_bits());
            assert_eq!(x.c.to_bits(), y.c.to_bits());
        }
    }

    #[test]
    fn permutation_enumeration_is_complete() {
        let mut p = vec![0usize, 1, 2];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 6);
    }
}
