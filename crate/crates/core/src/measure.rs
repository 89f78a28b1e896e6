//! Measurement families on a single qubit.
//!
//! Every element is stored in Bloch form B_k = c_k (I + a_k·σ) with c_k ≥ 0
//! and ‖a_k‖ = 1 for the rank-1 families in scope. Completeness requires
//! Σ c_k = 1 and Σ c_k a_k = 0.
//!
//! Families: two-outcome projective measurements along an arbitrary axis,
//! the four-outcome coupling-oriented IC POVM whose Bloch vectors point to
//! alternating corners of the (Jx, Jy, Jz) parallelepiped, its symmetric
//! (regular-tetrahedron) degeneration, and rigid rotations of any of them.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Measurement family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Proj,
    Sic,
    Cic,
    Cic3,
}

/// One positive operator B = weight · (I + axis·σ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmElement {
    pub weight: f64,
    pub axis: [f64; 3],
}

impl PovmElement {
    /// The 2×2 operator in the σᶻ basis.
    pub fn operator(&self) -> [[Complex64; 2]; 2] {
        let c = self.weight;
        let [ax, ay, az] = self.axis;
        [
            [
                Complex64::new(c * (1.0 + az), 0.0),
                Complex64::new(c * ax, -c * ay),
            ],
            [
                Complex64::new(c * ax, c * ay),
                Complex64::new(c * (1.0 - az), 0.0),
            ],
        ]
    }

    pub fn axis_norm(&self) -> f64 {
        let [x, y, z] = self.axis;
        (x * x + y * y + z * z).sqrt()
    }
}

/// A weighted set of Bloch-parameterized positive operators resolving the
/// identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub family: Family,
    /// Generating parameters: angles for Proj, couplings for Cic/Cic3,
    /// with rotation angles appended by [`rotate`].
    pub params: Vec<f64>,
    pub elements: Vec<PovmElement>,
}

impl Measurement {
    /// Checks the resolution-of-identity and rank-1 invariants.
    pub fn validate(&self) -> Result<()> {
        let mut wsum = 0.0;
        let mut bias = [0.0f64; 3];
        for el in &self.elements {
            if el.weight < 0.0 {
                return Err(Error::UnsupportedMeasurement(format!(
                    "negative weight {}",
                    el.weight
                )));
            }
            if (el.axis_norm() - 1.0).abs() > 1e-12 {
                return Err(Error::UnsupportedMeasurement(format!(
                    "element axis norm {} is not 1",
                    el.axis_norm()
                )));
            }
            wsum += el.weight;
            for (b, a) in bias.iter_mut().zip(el.axis) {
                *b += el.weight * a;
            }
        }
        if (wsum - 1.0).abs() > 1e-12 {
            return Err(Error::UnsupportedMeasurement(format!(
                "weights sum to {wsum}, expected 1"
            )));
        }
        let bias_norm = (bias[0] * bias[0] + bias[1] * bias[1] + bias[2] * bias[2]).sqrt();
        if bias_norm > 1e-12 {
            return Err(Error::UnsupportedMeasurement(format!(
                "weighted Bloch vectors sum to norm {bias_norm:.3e}, identity not resolved"
            )));
        }
        Ok(())
    }

    /// Human-readable report line: family, parameters and the explicit
    /// (c_k, a_k) list at 12 significant digits.
    pub fn report_string(&self) -> String {
        let family = match self.family {
            Family::Proj => "proj",
            Family::Sic => "sic",
            Family::Cic => "cic",
            Family::Cic3 => "cic3",
        };
        let params: Vec<String> = self.params.iter().map(|p| format!("{p:.11e}")).collect();
        let elements: Vec<String> = self
            .elements
            .iter()
            .map(|el| {
                format!(
                    "c={:.11e} a=({:.11e}, {:.11e}, {:.11e})",
                    el.weight, el.axis[0], el.axis[1], el.axis[2]
                )
            })
            .collect();
        format!("{family}[{}]: {}", params.join(", "), elements.join("; "))
    }
}

/// Bloch angles of one rank-1 element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rank1State {
    /// Polar angle in [0, π].
    pub theta: f64,
    /// Azimuthal angle in [0, 2π).
    pub phi: f64,
    pub weight: f64,
}

/// Unit vector for Bloch angles (θ, φ).
pub fn bloch_vector(theta: f64, phi: f64) -> [f64; 3] {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

/// Wraps arbitrary angles into θ ∈ [0, π], φ ∈ [0, 2π) keeping the Bloch
/// vector fixed.
pub fn canonical_angles(theta: f64, phi: f64) -> (f64, f64) {
    let tau = std::f64::consts::TAU;
    let mut t = theta.rem_euclid(tau);
    let mut p = phi;
    if t > std::f64::consts::PI {
        t = tau - t;
        p += std::f64::consts::PI;
    }
    let mut p = p.rem_euclid(tau);
    if tau - p < 1e-9 {
        p = 0.0;
    }
    (t, p)
}

/// Two-outcome projective measurement ½(I ± n̂·σ) along n̂(θ, φ).
pub fn projective(theta: f64, phi: f64) -> Measurement {
    let (t, p) = canonical_angles(theta, phi);
    let n = bloch_vector(t, p);
    Measurement {
        family: Family::Proj,
        params: vec![t, p],
        elements: vec![
            PovmElement {
                weight: 0.5,
                axis: n,
            },
            PovmElement {
                weight: 0.5,
                axis: [-n[0], -n[1], -n[2]],
            },
        ],
    }
}

fn cic_elements(jx: f64, jy: f64, jz: f64) -> Result<Vec<PovmElement>> {
    let norm = (jx * jx + jy * jy + jz * jz).sqrt();
    if norm < 1e-300 {
        return Err(Error::invalid("CIC POVM requires a nonzero coupling vector"));
    }
    let (x, y, z) = (jx / norm, jy / norm, jz / norm);
    let signs = [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ];
    Ok(signs
        .iter()
        .map(|s| PovmElement {
            weight: 0.25,
            axis: [s[0] * x, s[1] * y, s[2] * z],
        })
        .collect())
}

/// Coupling-oriented IC POVM: four elements ¼(I + a_k·σ) with
/// a_1 ∝ (Jx, Jy, Jz) and the remaining axes obtained by flipping pairs of
/// signs, so that Σ a_k = 0. Coinciding axes (when some J is zero) are kept
/// as duplicated elements.
pub fn cic_povm(jx: f64, jy: f64, jz: f64) -> Result<Measurement> {
    Ok(Measurement {
        family: Family::Cic,
        params: vec![jx, jy, jz],
        elements: cic_elements(jx, jy, jz)?,
    })
}

/// Symmetric IC POVM: the regular-tetrahedron degeneration of the CIC POVM
/// at equal couplings.
pub fn sic_povm() -> Measurement {
    Measurement {
        family: Family::Sic,
        params: vec![],
        elements: cic_elements(1.0, 1.0, 1.0).expect("nonzero couplings"),
    }
}

/// Rigid rotation R = R_z(φ)·R_y(θ) of every element axis; weights kept.
/// R_y(θ) maps ẑ to (sin θ, 0, cos θ), then R_z(φ) rotates about ẑ.
pub fn rotate(m: &Measurement, theta: f64, phi: f64) -> Measurement {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let rot = |a: [f64; 3]| -> [f64; 3] {
        // R_y(θ)
        let x1 = ct * a[0] + st * a[2];
        let y1 = a[1];
        let z1 = -st * a[0] + ct * a[2];
        // R_z(φ)
        [cp * x1 - sp * y1, sp * x1 + cp * y1, z1]
    };
    let elements = m
        .elements
        .iter()
        .map(|el| PovmElement {
            weight: el.weight,
            axis: rot(el.axis),
        })
        .collect();
    let mut params = m.params.clone();
    params.push(theta);
    params.push(phi);
    Measurement {
        family: m.family,
        params,
        elements,
    }
}

/// Bloch angles (θ_k, φ_k) of each rank-1 element, for reporting optimized
/// measurements in projector form.
pub fn rank1_decomposition(m: &Measurement) -> Result<Vec<Rank1State>> {
    m.elements
        .iter()
        .map(|el| {
            if (el.axis_norm() - 1.0).abs() > 1e-8 {
                return Err(Error::UnsupportedMeasurement(format!(
                    "element with ‖a‖ = {} is not rank-1",
                    el.axis_norm()
                )));
            }
            let [x, y, z] = el.axis;
            let theta = z.clamp(-1.0, 1.0).acos();
            let phi = if theta.sin().abs() < 1e-12 {
                0.0
            } else {
                y.atan2(x).rem_euclid(std::f64::consts::TAU)
            };
            Ok(Rank1State {
                theta,
                phi,
                weight: el.weight,
            })
        })
        .collect()
}
