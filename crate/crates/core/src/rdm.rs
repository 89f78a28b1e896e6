//! One- and two-site reduced density matrices.
//!
//! Two independent extraction paths are kept permanently as mutual oracles:
//! direct partial trace of the pure state, and reconstruction from the 16
//! Pauli correlators ρ = ¼ Σ_{αβ} T[α][β] σ^α ⊗ σ^β. Basis-convention bugs
//! are silent and deadly in this domain; the paths cross-check each other.
//!
//! Two-site basis order: |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩ with the first slot being
//! subsystem A (= chain site i, the smaller index).

use crate::error::{Error, Result};
use crate::spinchain::{apply_sigma, Axis, StateVector};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Hermitian, unit-trace, positive-semidefinite 2×2 or 4×4 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (smallest eigenvalue ≥ −1e-10).
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        Self::with_positivity_floor(m, -1e-10)
    }

    fn with_positivity_floor(m: DMatrix<Complex64>, floor: f64) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c || (r != 2 && r != 4) {
            return Err(Error::InvalidState(format!(
                "density matrix must be 2x2 or 4x4, got {r}x{c}"
            )));
        }
        let mut herm_dev = 0.0f64;
        for i in 0..r {
            for j in 0..r {
                let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
                herm_dev = herm_dev.max(dev);
            }
        }
        if herm_dev > 1e-12 {
            return Err(Error::InvalidState(format!(
                "hermiticity violated by {herm_dev:.3e}"
            )));
        }
        let trace: Complex64 = (0..r).map(|i| m[(i, i)]).sum();
        if (trace.re - 1.0).abs() > 1e-12 || trace.im.abs() > 1e-12 {
            return Err(Error::InvalidState(format!(
                "trace {trace} deviates from 1 beyond 1e-12"
            )));
        }
        let dm = Self { m };
        let min_eig = dm
            .eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < floor {
            return Err(Error::InvalidState(format!(
                "smallest eigenvalue {min_eig:.3e} below {floor:.1e}"
            )));
        }
        Ok(dm)
    }

    /// Projector |v⟩⟨v| onto a pure state given by its amplitudes.
    pub fn pure(amps: &[Complex64]) -> Result<Self> {
        let d = amps.len();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm < 1e-300 {
            return Err(Error::invalid("zero vector has no projector"));
        }
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = amps[i] * amps[j].conj() / norm;
            }
        }
        Self::new(m)
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Self { m }
    }

    pub(crate) fn from_validated(m: DMatrix<Complex64>) -> Self {
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    /// Real eigenvalues of the Hermitian matrix (unsorted).
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim() == 2 {
            let a = self.m[(0, 0)].re;
            let d = self.m[(1, 1)].re;
            let off = self.m[(0, 1)].norm_sqr();
            let mid = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + off).sqrt();
            return vec![mid - rad, mid + rad];
        }
        self.m
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += (self.m[(i, j)] * self.m[(j, i)]).re;
            }
        }
        acc
    }

    /// Partial trace over B of a two-qubit state (keeps the first slot).
    pub fn marginal_a(&self) -> Result<DensityMatrix> {
        self.marginal(true)
    }

    /// Partial trace over A of a two-qubit state (keeps the second slot).
    pub fn marginal_b(&self) -> Result<DensityMatrix> {
        self.marginal(false)
    }

    fn marginal(&self, keep_a: bool) -> Result<DensityMatrix> {
        if self.dim() != 4 {
            return Err(Error::invalid("marginals require a 4x4 state"));
        }
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        for p in 0..2 {
            for q in 0..2 {
                let mut acc = Complex64::ZERO;
                for t in 0..2 {
                    let (r, c) = if keep_a {
                        (2 * p + t, 2 * q + t)
                    } else {
                        (2 * t + p, 2 * t + q)
                    };
                    acc += self.m[(r, c)];
                }
                m[(p, q)] = acc;
            }
        }
        Ok(DensityMatrix::from_validated(m))
    }
}

/// Two-point Pauli correlators T[α][β] = ⟨σ^α_A σ^β_B⟩, axis order
/// (identity, x, y, z).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorTable {
    pub t: [[f64; 4]; 4],
}

impl CorrelatorTable {
    /// Checks the normalization entry and the correlator range.
    pub fn new(t: [[f64; 4]; 4]) -> Result<Self> {
        if t[0][0] != 1.0 {
            return Err(Error::invalid(format!(
                "T[0][0] must be exactly 1, got {}",
                t[0][0]
            )));
        }
        for row in &t {
            for &v in row {
                if !(v.abs() <= 1.0 + 1e-10) {
                    return Err(Error::invalid(format!(
                        "correlator {v} outside [-1-1e-10, 1+1e-10]"
                    )));
                }
            }
        }
        Ok(Self { t })
    }
}

fn check_sites(v: &StateVector, i: usize, j: usize) -> Result<()> {
    if i >= j || j >= v.sites() {
        return Err(Error::invalid(format!(
            "need 0 <= i < j < L, got i={i}, j={j}, L={}",
            v.sites()
        )));
    }
    Ok(())
}

/// Extracts the index of the remaining sites once bits `i` (and optionally
/// `j`) are removed from basis index `n`.
fn rest_index(n: usize, i: usize, j: Option<usize>) -> usize {
    let mut out = 0usize;
    let mut shift = 0;
    let sites = usize::BITS as usize;
    for bit in 0..sites {
        if bit == i || Some(bit) == j {
            continue;
        }
        out |= ((n >> bit) & 1) << shift;
        shift += 1;
        if shift >= sites - 2 {
            break;
        }
    }
    out
}

/// Partial trace of |v⟩⟨v| over all sites except `i`.
pub fn single_site_rdm(v: &StateVector, i: usize) -> Result<DensityMatrix> {
    if i >= v.sites() {
        return Err(Error::invalid(format!(
            "site {i} out of range for L = {}",
            v.sites()
        )));
    }
    let half = v.dim() / 2;
    let mut slices = vec![vec![Complex64::ZERO; half]; 2];
    for (n, &amp) in v.amplitudes().iter().enumerate() {
        let a = (n >> i) & 1;
        slices[a][rest_index(n, i, None)] = amp;
    }
    let mut m = DMatrix::<Complex64>::zeros(2, 2);
    for p in 0..2 {
        for q in 0..2 {
            let mut acc = Complex64::ZERO;
            for e in 0..half {
                acc += slices[p][e] * slices[q][e].conj();
            }
            m[(p, q)] = acc;
        }
    }
    DensityMatrix::new(m)
}

/// Partial trace of |v⟩⟨v| over all sites except `i` and `j`; subsystem A is
/// site `i`.
pub fn two_site_rdm(v: &StateVector, i: usize, j: usize) -> Result<DensityMatrix> {
    check_sites(v, i, j)?;
    let quarter = v.dim() / 4;
    let mut slices = vec![vec![Complex64::ZERO; quarter]; 4];
    for (n, &amp) in v.amplitudes().iter().enumerate() {
        let a = (n >> i) & 1;
        let b = (n >> j) & 1;
        slices[2 * a + b][rest_index(n, i, Some(j))] = amp;
    }
    let mut m = DMatrix::<Complex64>::zeros(4, 4);
    for p in 0..4 {
        for q in 0..4 {
            let mut acc = Complex64::ZERO;
            for e in 0..quarter {
                acc += slices[p][e] * slices[q][e].conj();
            }
            m[(p, q)] = acc;
        }
    }
    DensityMatrix::new(m)
}

/// All 16 two-point Pauli correlators ⟨σ^α_i σ^β_j⟩ contracted directly on
/// the full state (independent of the partial-trace path).
pub fn pauli_correlators(v: &StateVector, i: usize, j: usize) -> Result<CorrelatorTable> {
    check_sites(v, i, j)?;
    let image = |site: usize, alpha: usize| -> Result<Vec<Complex64>> {
        match alpha {
            0 => Ok(v.amplitudes().to_vec()),
            1 => apply_sigma(v, site, Axis::X),
            2 => apply_sigma(v, site, Axis::Y),
            _ => apply_sigma(v, site, Axis::Z),
        }
    };
    let mut ima = Vec::with_capacity(4);
    let mut imb = Vec::with_capacity(4);
    for alpha in 0..4 {
        ima.push(image(i, alpha)?);
        imb.push(image(j, alpha)?);
    }
    let mut t = [[0.0f64; 4]; 4];
    for alpha in 0..4 {
        for beta in 0..4 {
            // ⟨v|σ^α_i σ^β_j|v⟩ = ⟨σ^α_i v, σ^β_j v⟩ since the Paulis are
            // Hermitian and act on different sites.
            let val: Complex64 = ima[alpha]
                .iter()
                .zip(imb[beta].iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            if val.im.abs() > 1e-10 {
                return Err(Error::InvalidState(format!(
                    "correlator ({alpha},{beta}) carries imaginary residue {:.3e}",
                    val.im
                )));
            }
            t[alpha][beta] = val.re;
        }
    }
    t[0][0] = 1.0;
    CorrelatorTable::new(t)
}

fn pauli_matrix(alpha: usize) -> [[Complex64; 2]; 2] {
    let z = Complex64::ZERO;
    let one = Complex64::ONE;
    let i = Complex64::new(0.0, 1.0);
    match alpha {
        0 => [[one, z], [z, one]],
        1 => [[z, one], [one, z]],
        2 => [[z, -i], [i, z]],
        _ => [[one, z], [z, -one]],
    }
}

/// Reconstructs ρ_AB = ¼ Σ_{αβ} T[α][β] σ^α ⊗ σ^β from a correlator table.
pub fn rdm_from_correlators(table: &CorrelatorTable) -> Result<DensityMatrix> {
    let mut m = DMatrix::<Complex64>::zeros(4, 4);
    for alpha in 0..4 {
        let sa = pauli_matrix(alpha);
        for beta in 0..4 {
            let sb = pauli_matrix(beta);
            let w = table.t[alpha][beta] * 0.25;
            if w == 0.0 {
                continue;
            }
            for a in 0..2 {
                for ap in 0..2 {
                    for b in 0..2 {
                        for bp in 0..2 {
                            m[(2 * a + b, 2 * ap + bp)] += sa[a][ap] * sb[b][bp] * w;
                        }
                    }
                }
            }
        }
    }
    DensityMatrix::with_positivity_floor(m, -1e-8).map_err(|e| match e {
        Error::InvalidState(msg) => Error::InconsistentCorrelators(msg),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn singlet() -> StateVector {
        StateVector::from_unnormalized(2, vec![c(0.0), c(-1.0), c(1.0), c(0.0)]).unwrap()
    }

    fn plus_plus() -> StateVector {
        StateVector::from_unnormalized(2, vec![c(1.0); 4]).unwrap()
    }

    #[test]
    fn single_site_examples() {
        let up = StateVector::basis(4, 0);
        let r = single_site_rdm(&up, 2).unwrap();
        assert_abs_diff_eq!(r.entry(0, 0).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.entry(1, 1).re, 0.0, epsilon = 1e-15);

        let r = single_site_rdm(&singlet(), 0).unwrap();
        assert_abs_diff_eq!(r.entry(0, 0).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(r.entry(1, 1).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(r.entry(0, 1).norm(), 0.0, epsilon = 1e-14);

        let r = single_site_rdm(&plus_plus(), 1).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(r.entry(i, j).re, 0.5, epsilon = 1e-14);
                assert_abs_diff_eq!(r.entry(i, j).im, 0.0, epsilon = 1e-14);
            }
        }

        assert!(single_site_rdm(&up, 4).is_err());
    }

    #[test]
    fn two_site_examples() {
        let up = StateVector::basis(6, 0);
        let r = two_site_rdm(&up, 2, 3).unwrap();
        assert_abs_diff_eq!(r.entry(0, 0).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.purity(), 1.0, epsilon = 1e-12);

        // singlet projector: support on |↑↓⟩, |↓↑⟩ with sign −
        let r = two_site_rdm(&singlet(), 0, 1).unwrap();
        assert_abs_diff_eq!(r.entry(1, 1).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(r.entry(2, 2).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(r.entry(1, 2).re, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(r.entry(0, 0).norm(), 0.0, epsilon = 1e-14);

        assert!(two_site_rdm(&up, 3, 3).is_err());
        assert!(two_site_rdm(&up, 3, 2).is_err());
        assert!(two_site_rdm(&up, 3, 6).is_err());
    }

    #[test]
    fn correlator_examples() {
        let up = StateVector::basis(3, 0);
        let t = pauli_correlators(&up, 0, 1).unwrap().t;
        assert_abs_diff_eq!(t[3][3], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t[3][0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t[0][3], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t[1][1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t[2][2], 0.0, epsilon = 1e-14);

        let t = pauli_correlators(&singlet(), 0, 1).unwrap().t;
        for alpha in 1..4 {
            assert_abs_diff_eq!(t[alpha][alpha], -1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(t[alpha][0], 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(t[0][alpha], 0.0, epsilon = 1e-14);
        }

        let t = pauli_correlators(&plus_plus(), 0, 1).unwrap().t;
        assert_abs_diff_eq!(t[1][1], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t[1][0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t[0][1], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t[3][3], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn reconstruction_matches_partial_trace() {
        for v in [singlet(), plus_plus()] {
            let direct = two_site_rdm(&v, 0, 1).unwrap();
            let t = pauli_correlators(&v, 0, 1).unwrap();
            let rebuilt = rdm_from_correlators(&t).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    assert_abs_diff_eq!(
                        (direct.entry(i, j) - rebuilt.entry(i, j)).norm(),
                        0.0,
                        epsilon = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn identity_table_gives_maximally_mixed() {
        let mut t = [[0.0; 4]; 4];
        t[0][0] = 1.0;
        let rho = rdm_from_correlators(&CorrelatorTable::new(t).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 0.25 } else { 0.0 };
                assert_abs_diff_eq!(rho.entry(i, j).re, expect, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn inconsistent_table_rejected() {
        // T[x][x] = T[y][y] = T[z][z] = +1 is not a state (would need
        // simultaneous perfect correlation on all axes).
        let mut t = [[0.0; 4]; 4];
        t[0][0] = 1.0;
        t[1][1] = 1.0;
        t[2][2] = 1.0;
        t[3][3] = 1.0;
        let table = CorrelatorTable::new(t).unwrap();
        assert!(matches!(
            rdm_from_correlators(&table),
            Err(Error::InconsistentCorrelators(_))
        ));
    }

    #[test]
    fn marginal_consistency() {
        let v = StateVector::from_unnormalized(
            3,
            (0..8)
                .map(|n| Complex64::new(0.3 + n as f64 * 0.41, (n as f64 * 0.17).sin()))
                .collect(),
        )
        .unwrap();
        let pair = two_site_rdm(&v, 0, 2).unwrap();
        let single = single_site_rdm(&v, 0).unwrap();
        let ma = pair.marginal_a().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(
                    (ma.entry(i, j) - single.entry(i, j)).norm(),
                    0.0,
                    epsilon = 1e-12
                );
            }
        }
    }
}
