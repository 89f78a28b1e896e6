//! Numerical engine for correlations in anisotropic spin-1/2 chains.
//!
//! The crate computes ground states of open XYZ chains in a transverse
//! field by exact diagonalization, extracts one- and two-site reduced
//! density matrices, and evaluates the classical correlations that local
//! projective and four-outcome POVM measurements establish between two
//! spins, together with the measurement parameters that maximize them.
//!
//! Pipeline: [`spinchain`] solves for the ground state, [`rdm`] reduces it
//! to a two-qubit state, [`measure`] builds measurement families,
//! [`infotheory`] scores them, [`optimize`] searches over them, and
//! [`analysis`] drives field sweeps and physics-level diagnostics.

pub mod analysis;
pub mod error;
pub mod infotheory;
pub mod measure;
pub mod optimize;
pub mod rdm;
pub mod spinchain;

pub use error::{Error, Result};
