//! Covariance-matrix calculus for Gaussian bosonic channels.
//!
//! The crate builds phase-insensitive single-mode channels (thermal
//! attenuators and amplifiers) and a two-mode PPT channel family from their
//! symplectic dilations, evaluates coherent information and capacity upper
//! bounds, and searches a three-parameter squeezed input family for
//! activation of quantum capacity. A small finite-dimensional density-matrix
//! oracle cross-checks the entanglement-breaking additivity property that
//! underpins the search's no-activation baseline.
//!
//! Everything here is `no_std` + `alloc`; the companion CLI crate carries
//! file formats and parallel sweeps. All quantities are second moments:
//! displacements are dropped throughout because every entropy-derived
//! quantity used here is displacement-invariant. Covariance matrices are
//! ordered (Q1, P1, Q2, P2, ...) with vacuum normalized to the identity.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

use alloc::string::String;
use core::fmt;

pub mod activation;
pub mod bounds;
pub mod channels;
pub mod fd;
pub mod neldermead;
pub mod sampling;
pub mod selftest;
pub mod symplectic;

/// Error type shared by all modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix dimension does not match what the operation requires.
    DimensionMismatch { expected: usize, got: usize },
    /// A scalar argument is outside its documented range.
    OutOfRange { what: &'static str, value: f64 },
    /// A covariance matrix violates the physicality condition beyond tolerance.
    Unphysical { min_eig: f64 },
    /// A matrix expected to be symplectic is not, within tolerance.
    NotSymplectic { max_dev: f64 },
    /// Eigenvalues of J*gamma failed to form +/- pairs (gamma not positive definite).
    PairingFailure { gap: f64 },
    /// An operation was invoked on an unsupported channel/bound combination.
    UnsupportedCombination(String),
    /// A mode index is out of range.
    ModeIndex { index: usize, n_modes: usize },
    /// Problem size exceeds the fixed computational budget.
    BudgetExceeded { dim: usize, max: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::OutOfRange { what, value } => {
                write!(f, "argument out of range: {what} = {value}")
            }
            Error::Unphysical { min_eig } => {
                write!(f, "unphysical covariance matrix: min eig of gamma + iJ = {min_eig}")
            }
            Error::NotSymplectic { max_dev } => {
                write!(f, "matrix is not symplectic: max |SJS^T - J| = {max_dev}")
            }
            Error::PairingFailure { gap } => {
                write!(f, "eigenvalues of J*gamma do not pair (gap {gap}); gamma must be positive definite")
            }
            Error::UnsupportedCombination(msg) => write!(f, "unsupported combination: {msg}"),
            Error::ModeIndex { index, n_modes } => {
                write!(f, "mode index {index} out of range for {n_modes} modes")
            }
            Error::BudgetExceeded { dim, max } => {
                write!(f, "total dimension {dim} exceeds budget {max}")
            }
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
