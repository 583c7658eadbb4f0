//! Seeded sampling of symplectic matrices and physical covariance matrices.
//!
//! Random symplectics are built as products of structured factors (per-mode
//! squeezers and rotations, two-mode beamsplitters), so they satisfy
//! SJS^T = J to machine precision by construction, and conjugating a
//! Williamson-diagonal matrix by one yields a physical state with a known
//! symplectic spectrum.

use nalgebra::DMatrix;
// float math resolves through the trait in no_std builds; tests link std
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::symplectic::CovMatrix;

/// Random symplectic on `n_modes` modes: three layers of squeeze, rotate,
/// and nearest-neighbor beamsplitter factors.
pub fn random_symplectic<R: Rng>(n_modes: usize, rng: &mut R) -> DMatrix<f64> {
    let dim = 2 * n_modes;
    let mut s = DMatrix::identity(dim, dim);
    for _ in 0..3 {
        let mut layer = DMatrix::<f64>::identity(dim, dim);
        for m in 0..n_modes {
            let r: f64 = rng.gen_range(-0.6..0.6);
            let theta: f64 = rng.gen_range(0.0..core::f64::consts::TAU);
            let (c, sn) = (theta.cos(), theta.sin());
            let (e, ei) = (r.exp(), (-r).exp());
            // squeeze then rotate, composed as a single 2x2 factor
            let block = nalgebra::Matrix2::new(c * e, sn * ei, -sn * e, c * ei);
            layer.view_mut((2 * m, 2 * m), (2, 2)).copy_from(&block);
        }
        s = &layer * &s;
        for m in 0..n_modes.saturating_sub(1) {
            let phi: f64 = rng.gen_range(0.0..core::f64::consts::TAU);
            let (c, sn) = (phi.cos(), phi.sin());
            let mut bs = DMatrix::<f64>::identity(dim, dim);
            for k in 0..2 {
                bs[(2 * m + k, 2 * m + k)] = c;
                bs[(2 * m + k, 2 * m + 2 + k)] = sn;
                bs[(2 * m + 2 + k, 2 * m + k)] = -sn;
                bs[(2 * m + 2 + k, 2 * m + 2 + k)] = c;
            }
            s = &bs * &s;
        }
    }
    s
}

/// Random physical covariance matrix with symplectic spectrum >= 1.
pub fn random_physical_cov<R: Rng>(n_modes: usize, rng: &mut R) -> CovMatrix {
    random_physical_cov_with_spectrum(n_modes, rng).0
}

/// Random physical covariance matrix together with the spectrum it was
/// built from: S diag(nu_k, nu_k) S^T for a random symplectic S.
pub fn random_physical_cov_with_spectrum<R: Rng>(
    n_modes: usize,
    rng: &mut R,
) -> (CovMatrix, alloc::vec::Vec<f64>) {
    let dim = 2 * n_modes;
    let mut d = DMatrix::zeros(dim, dim);
    let mut nus = alloc::vec::Vec::with_capacity(n_modes);
    for m in 0..n_modes {
        let nu: f64 = 1.0 + rng.gen_range(0.0..1.5);
        d[(2 * m, 2 * m)] = nu;
        d[(2 * m + 1, 2 * m + 1)] = nu;
        nus.push(nu);
    }
    let s = random_symplectic(n_modes, rng);
    let gamma = CovMatrix::new(&s * d * s.transpose()).expect("construction is symmetric");
    (gamma, nus)
}

/// Random pure covariance matrix: symplectic conjugation of the vacuum.
pub fn random_pure_cov<R: Rng>(n_modes: usize, rng: &mut R) -> CovMatrix {
    let s = random_symplectic(n_modes, rng);
    CovMatrix::new(&s * s.transpose()).expect("construction is symmetric")
}
