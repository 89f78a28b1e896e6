//! Entropic functionals: von Neumann entropy, mutual information,
//! measurement-conditioned entropy, classical correlations, discord.
//!
//! All quantities in bits (base-2 logarithms). Conditioning follows the
//! rank-1 reduction: for a rank-1 element B_k on subsystem B the
//! post-measurement joint state factorizes as ρ_A^{(k)} ⊗ (pure B state), so
//! its entropy equals S(ρ_A^{(k)}). Non-rank-1 measurements are rejected
//! rather than guessed at.

use crate::error::{Error, Result};
use crate::measure::Measurement;
use crate::rdm::DensityMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Outcome probabilities below this floor contribute nothing (0·log 0 = 0).
pub const P_FLOOR: f64 = 1e-14;

/// All entropic quantities of a two-qubit state for one measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationValues {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    /// Mutual information I = S_A + S_B − S_AB.
    pub mutual: f64,
    /// Conditional entropy S_C = Σ_k p_k S(ρ_A^{(k)}).
    pub conditional: f64,
    /// Classical correlations C = S_A − S_C for this measurement.
    pub classical: f64,
    /// Discord Q = I − C for this measurement.
    pub discord: f64,
    /// The measurement that produced S_C, C and Q.
    pub measurement: Measurement,
}

fn entropy_term(lambda: f64) -> f64 {
    if lambda > 0.0 {
        -lambda * lambda.log2()
    } else {
        0.0
    }
}

/// −Σ λ log₂ λ over the eigenvalues; eigenvalues in [−1e-10, 0) are clamped
/// to zero, anything more negative is an invalid state.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let mut s = 0.0;
    for lambda in rho.eigenvalues() {
        if lambda < -1e-10 {
            return Err(Error::InvalidState(format!(
                "eigenvalue {lambda:.3e} below -1e-10"
            )));
        }
        s += entropy_term(lambda);
    }
    Ok(s)
}

/// Entropy of an (unnormalized) Hermitian 2×2 matrix with trace p, i.e. the
/// entropy of m/p, given directly by its two eigenvalues scaled by 1/p.
fn entropy_2x2_scaled(m00: f64, m11: f64, off: Complex64, p: f64) -> f64 {
    let mid = 0.5 * (m00 + m11);
    let rad = (0.25 * (m00 - m11) * (m00 - m11) + off.norm_sqr()).sqrt();
    entropy_term((mid - rad) / p) + entropy_term((mid + rad) / p)
}

/// I = S(ρ_A) + S(ρ_B) − S(ρ_AB).
pub fn mutual_information(rho_ab: &DensityMatrix) -> Result<f64> {
    if rho_ab.dim() != 4 {
        return Err(Error::invalid("mutual information requires a 4x4 state"));
    }
    let sa = von_neumann_entropy(&rho_ab.marginal_a()?)?;
    let sb = von_neumann_entropy(&rho_ab.marginal_b()?)?;
    let sab = von_neumann_entropy(rho_ab)?;
    Ok(sa + sb - sab)
}

/// ρ_A^{(k)} before normalization: Tr_B[(I ⊗ B_k) ρ_AB], as 2×2 entries.
/// Returns (m00, m11, m01) with m10 = conj(m01) implied.
fn conditioned_block(
    rho: &[Complex64; 16],
    b: &[[Complex64; 2]; 2],
) -> (f64, f64, Complex64) {
    let mut m = [[Complex64::ZERO; 2]; 2];
    for a in 0..2 {
        for ap in 0..2 {
            let mut acc = Complex64::ZERO;
            for bb in 0..2 {
                for cc in 0..2 {
                    // [Tr_B((I⊗B)ρ)]_{a,a'} = Σ_{b,c} B[b][c] ρ[(a,c),(a',b)]
                    acc += b[bb][cc] * rho[(2 * a + cc) * 4 + (2 * ap + bb)];
                }
            }
            m[a][ap] = acc;
        }
    }
    (m[0][0].re, m[1][1].re, m[0][1])
}

fn rho_as_array(rho_ab: &DensityMatrix) -> Result<[Complex64; 16]> {
    if rho_ab.dim() != 4 {
        return Err(Error::invalid("conditioning requires a 4x4 state"));
    }
    let mut arr = [Complex64::ZERO; 16];
    for i in 0..4 {
        for j in 0..4 {
            arr[i * 4 + j] = rho_ab.entry(i, j);
        }
    }
    Ok(arr)
}

fn check_rank1(m: &Measurement) -> Result<()> {
    for el in &m.elements {
        if (el.axis_norm() - 1.0).abs() > 1e-8 {
            return Err(Error::UnsupportedMeasurement(format!(
                "conditioning needs rank-1 elements, got ‖a‖ = {}",
                el.axis_norm()
            )));
        }
    }
    Ok(())
}

/// S_C(ρ_AB | {B_k}) = Σ_k p_k S(ρ_A^{(k)}) with the measurement applied to
/// subsystem B.
pub fn conditional_entropy(rho_ab: &DensityMatrix, m: &Measurement) -> Result<f64> {
    check_rank1(m)?;
    let rho = rho_as_array(rho_ab)?;
    conditional_entropy_raw(&rho, m)
}

/// Hot-path variant over a pre-extracted 4×4 array.
pub(crate) fn conditional_entropy_raw(rho: &[Complex64; 16], m: &Measurement) -> Result<f64> {
    let mut s_c = 0.0;
    for el in &m.elements {
        let (m00, m11, off) = conditioned_block(rho, &el.operator());
        let p = m00 + m11;
        if p < -1e-12 {
            return Err(Error::InvalidState(format!(
                "outcome probability {p:.3e} below -1e-12"
            )));
        }
        if p <= P_FLOOR {
            continue;
        }
        s_c += p * entropy_2x2_scaled(m00, m11, off, p);
    }
    Ok(s_c)
}

/// C(ρ_AB | m) = S(ρ_A) − S_C(ρ_AB | m): the entropy reduction of A from
/// measuring B, before any maximization.
pub fn classical_correlations_given(rho_ab: &DensityMatrix, m: &Measurement) -> Result<f64> {
    let s_a = von_neumann_entropy(&rho_ab.marginal_a()?)?;
    Ok(s_a - conditional_entropy(rho_ab, m)?)
}

/// Q = I − C for the given measurement.
pub fn discord_given(rho_ab: &DensityMatrix, m: &Measurement) -> Result<f64> {
    Ok(mutual_information(rho_ab)? - classical_correlations_given(rho_ab, m)?)
}

/// Bundles every functional in one pass over the state.
pub fn correlation_values(rho_ab: &DensityMatrix, m: &Measurement) -> Result<CorrelationValues> {
    check_rank1(m)?;
    let s_a = von_neumann_entropy(&rho_ab.marginal_a()?)?;
    let s_b = von_neumann_entropy(&rho_ab.marginal_b()?)?;
    let s_ab = von_neumann_entropy(rho_ab)?;
    let mutual = s_a + s_b - s_ab;
    let rho = rho_as_array(rho_ab)?;
    let conditional = conditional_entropy_raw(&rho, m)?;
    let classical = s_a - conditional;
    Ok(CorrelationValues {
        s_a,
        s_b,
        s_ab,
        mutual,
        conditional,
        classical,
        discord: mutual - classical,
        measurement: m.clone(),
    })
}
