//! Shared helpers for the integration suites: seeded randomness, random
//! states and specs, and an independent brute-force optimization oracle.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use optcorr_core::infotheory::classical_correlations_given;
use optcorr_core::measure::{bloch_vector, cic_povm, projective, rotate, sic_povm, Measurement};
use optcorr_core::optimize::StrategyFamily;
use optcorr_core::rdm::DensityMatrix;
use optcorr_core::spinchain::ModelSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian via Box–Muller.
pub fn gaussian_c64(rng: &mut ChaCha8Rng) -> Complex64 {
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen_range(0.0..TAU);
    let r = (-2.0 * u1.ln()).sqrt();
    Complex64::new(r * u2.cos(), r * u2.sin()) / 2f64.sqrt()
}

/// Full-rank random density matrix (Ginibre ensemble): G G† / Tr.
pub fn random_density_matrix(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let g = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| gaussian_c64(rng));
    let m = &g * g.adjoint();
    let tr: Complex64 = (0..dim).map(|i| m[(i, i)]).sum();
    DensityMatrix::new(m / tr).expect("Ginibre matrix is a valid state")
}

/// Random normalized pure two-qubit state as a density matrix.
pub fn random_pure_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let amps: Vec<Complex64> = (0..4).map(|_| gaussian_c64(rng)).collect();
    DensityMatrix::pure(&amps).expect("nonzero amplitudes")
}

/// Random Haar-ish unitary from Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<Complex64> {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
        for c in &cols {
            let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= proj * ci;
            }
        }
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        cols.push(v);
    }
    DMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Random valid chain spec with generic (non-degenerate) fields.
pub fn random_spec(rng: &mut ChaCha8Rng, sites: usize) -> ModelSpec {
    loop {
        let jx: f64 = rng.gen_range(-1.5..1.5);
        let jy: f64 = rng.gen_range(-1.5..1.5);
        let jz: f64 = rng.gen_range(-1.5..1.5);
        let h: f64 = rng.gen_range(0.0..2.0);
        let hx: f64 = rng.gen_range(0.0..0.3);
        if let Ok(spec) = ModelSpec::new(jx, jy, jz, h, hx, sites) {
            return spec;
        }
    }
}

/// Measurement of `family` at rotation/direction angles (θ, φ); the
/// construction goes straight through the measurement constructors, not the
/// optimizer.
pub fn family_measurement(
    family: StrategyFamily,
    couplings: [f64; 3],
    theta: f64,
    phi: f64,
) -> Measurement {
    match family {
        StrategyFamily::ProjZ => projective(0.0, 0.0),
        StrategyFamily::ProjRot => projective(theta, phi),
        StrategyFamily::SicRot => rotate(&sic_povm(), theta, phi),
        StrategyFamily::CicRot => rotate(
            &cic_povm(couplings[0], couplings[1], couplings[2]).expect("nonzero seed"),
            theta,
            phi,
        ),
        StrategyFamily::Cic3Par => {
            let d = bloch_vector(theta, phi);
            cic_povm(d[0], d[1], d[2]).expect("unit direction")
        }
    }
}

/// Dense brute-force maximum of C over the family's parameter grid, with no
/// refinement. Independent oracle for the optimizer.
pub fn brute_force_c_max(
    rho: &DensityMatrix,
    family: StrategyFamily,
    couplings: [f64; 3],
    n_theta: usize,
    n_phi: usize,
) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..n_theta {
        let theta = PI * i as f64 / (n_theta - 1) as f64;
        for j in 0..n_phi {
            let phi = TAU * j as f64 / n_phi as f64;
            let m = family_measurement(family, couplings, theta, phi);
            let c = classical_correlations_given(rho, &m).expect("valid measurement");
            if c > best {
                best = c;
            }
        }
    }
    best
}
