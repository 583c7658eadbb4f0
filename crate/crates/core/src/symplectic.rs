//! Symplectic form, physicality tests, symplectic eigenvalues, and Gaussian
//! entropy for covariance matrices in (Q1, P1, Q2, P2, ...) ordering.

use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, SymmetricEigen};
// float math resolves through the trait in no_std builds; tests link std
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Symmetry tolerance enforced when constructing a [`CovMatrix`].
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Default eigenvalue tolerance for the physicality condition gamma + iJ >= 0.
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// Default tolerance for `is_symplectic`.
pub const SYMPLECTICITY_TOL: f64 = 1e-9;
/// Tolerance for matching the +/- eigenvalue pairs of J*gamma, scaled by
/// max(1, nu) so large thermal spectra do not trip it.
pub const PAIRING_TOL: f64 = 1e-7;
/// Symplectic eigenvalues below 1 - ENTROPY_NU_TOL make `gaussian_entropy`
/// refuse the input as unphysical rather than silently clamping.
pub const ENTROPY_NU_TOL: f64 = 1e-6;

/// Real symmetric covariance matrix of an n-mode Gaussian state.
///
/// Vacuum is the identity; displacements are not tracked. Construction
/// symmetrizes the data after checking the asymmetry is below
/// [`SYMMETRY_TOL`]. Physicality is a separate, optional check: partial
/// transposes and other intermediate matrices are representable.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix {
    n_modes: usize,
    data: DMatrix<f64>,
}

impl CovMatrix {
    /// Wraps a 2n x 2n symmetric matrix, symmetrizing residual asymmetry.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let (r, c) = data.shape();
        if r != c || r == 0 || r % 2 != 0 {
            return Err(Error::DimensionMismatch { expected: r + r % 2, got: c });
        }
        let mut max_asym = 0.0f64;
        for i in 0..r {
            for j in (i + 1)..r {
                let d = (data[(i, j)] - data[(j, i)]).abs();
                if d > max_asym {
                    max_asym = d;
                }
            }
        }
        if max_asym > SYMMETRY_TOL {
            return Err(Error::OutOfRange { what: "matrix asymmetry", value: max_asym });
        }
        let sym = (&data + data.transpose()) * 0.5;
        Ok(CovMatrix { n_modes: r / 2, data: sym })
    }

    /// Vacuum state on `n_modes` modes.
    pub fn identity(n_modes: usize) -> Self {
        CovMatrix { n_modes, data: DMatrix::identity(2 * n_modes, 2 * n_modes) }
    }

    /// Single-mode thermal state with mean photon number `nbar`: (2nbar+1) I.
    pub fn thermal(nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0) {
            return Err(Error::OutOfRange { what: "thermal nbar", value: nbar });
        }
        Ok(CovMatrix { n_modes: 1, data: DMatrix::identity(2, 2) * (2.0 * nbar + 1.0) })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// Mean photon number summed over modes: trace(gamma)/2 - n_modes ... all
    /// divided by 2 per mode quadrature pair.
    pub fn mean_photons(&self) -> f64 {
        self.data.trace() / 2.0 - self.n_modes as f64
    }
}

/// The 2n x 2n symplectic form, a block-diagonal stack of [[0,1],[-1,0]].
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        j[(2 * k, 2 * k + 1)] = 1.0;
        j[(2 * k + 1, 2 * k)] = -1.0;
    }
    j
}

/// Minimum eigenvalue of the Hermitian matrix gamma + iJ.
///
/// Nonnegative (within tolerance) exactly for physical covariance matrices.
pub fn physicality_min_eig(gamma: &CovMatrix) -> f64 {
    let dim = gamma.dim();
    let j = symplectic_form(gamma.n_modes());
    let mut h = DMatrix::from_element(dim, dim, Complex::new(0.0, 0.0));
    for r in 0..dim {
        for c in 0..dim {
            h[(r, c)] = Complex::new(gamma.data[(r, c)], j[(r, c)]);
        }
    }
    let eigs = SymmetricEigen::new(h).eigenvalues;
    eigs.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Physicality test: min eig of gamma + iJ >= -tol.
pub fn is_physical(gamma: &CovMatrix, tol: f64) -> bool {
    physicality_min_eig(gamma) >= -tol
}

/// Symplectic (Williamson) spectrum, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum {
    values: Vec<f64>,
}

impl SymplecticSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("spectrum is never empty")
    }
}

/// Symplectic eigenvalues of a positive definite covariance matrix.
///
/// With gamma = L L^T (Cholesky), J*gamma shares its spectrum with the real
/// antisymmetric K = L^T J L, so iK is Hermitian with spectrum in +/- nu
/// pairs. Only direct factorization and a Hermitian eigenvalue solve are
/// used; the nonsymmetric Schur iteration is avoided because it can fail to
/// converge on the cross-correlated covariances of thermal dilations.
pub fn symplectic_eigenvalues(gamma: &CovMatrix) -> Result<SymplecticSpectrum> {
    let dim = gamma.dim();
    let Some(chol) = gamma.data.clone().cholesky() else {
        let min_d =
            gamma.data.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        return Err(Error::Unphysical { min_eig: min_d });
    };
    let l = chol.l();
    let k = l.transpose() * symplectic_form(gamma.n_modes()) * &l;
    // Antisymmetrizing K before forming iK keeps H exactly Hermitian.
    let mut h = DMatrix::from_element(dim, dim, Complex::new(0.0, 0.0));
    for r in 0..dim {
        for c in 0..dim {
            h[(r, c)] = Complex::new(0.0, 0.5 * (k[(r, c)] - k[(c, r)]));
        }
    }
    let eigs = SymmetricEigen::new(h).eigenvalues;
    let mut mags: Vec<f64> = eigs.iter().map(|v| v.abs()).collect();
    mags.sort_unstable_by(|a, b| b.partial_cmp(a).expect("eigenvalue magnitudes are finite"));
    let mut values = Vec::with_capacity(gamma.n_modes());
    for pair in 0..gamma.n_modes() {
        let a = mags[2 * pair];
        let b = mags[2 * pair + 1];
        if (a - b).abs() > PAIRING_TOL * f64::max(1.0, a) || !(b > 0.0) {
            return Err(Error::PairingFailure { gap: a - b });
        }
        values.push(0.5 * (a + b));
    }
    Ok(SymplecticSpectrum { values })
}

/// Entropy of a thermal mode with mean photon number x, in bits:
/// g(x) = (1+x) log2(1+x) - x log2 x, with g(0) = 0.
pub fn g_function(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::OutOfRange { what: "g_function argument", value: x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok((1.0 + x) * (1.0 + x).log2() - x * x.log2())
}

/// Von Neumann entropy of a Gaussian state in bits: sum of g((nu_k - 1)/2).
///
/// Each nu is clamped to max(nu, 1) to absorb numerical undershoot on pure
/// states; undershoot beyond [`ENTROPY_NU_TOL`] is rejected as unphysical.
pub fn gaussian_entropy(gamma: &CovMatrix) -> Result<f64> {
    let spectrum = symplectic_eigenvalues(gamma)?;
    let min_nu = spectrum.min();
    if min_nu < 1.0 - ENTROPY_NU_TOL {
        return Err(Error::Unphysical { min_eig: min_nu - 1.0 });
    }
    let mut h = 0.0;
    for &nu in spectrum.values() {
        let nu = f64::max(nu, 1.0);
        h += g_function((nu - 1.0) / 2.0)?;
    }
    Ok(h)
}

/// Two-mode squeezed vacuum purifying a thermal state of mean photon number
/// `nbar`: diagonal blocks (2N+1) I, off-diagonal blocks 2 sqrt(N(N+1)) Z.
pub fn tmsv(nbar: f64) -> Result<CovMatrix> {
    if !(nbar >= 0.0) {
        return Err(Error::OutOfRange { what: "tmsv nbar", value: nbar });
    }
    let c = 2.0 * nbar + 1.0;
    let s = 2.0 * (nbar * (nbar + 1.0)).sqrt();
    Ok(tmsv_blocks(c, s))
}

/// Two-mode squeezed vacuum in the squeezing-parameter convention:
/// diagonal blocks cosh(2r) I, off-diagonal blocks sinh(2r) Z.
pub fn tmsv_from_squeezing(r: f64) -> CovMatrix {
    tmsv_blocks((2.0 * r).cosh(), (2.0 * r).sinh())
}

fn tmsv_blocks(c: f64, s: f64) -> CovMatrix {
    let mut m = DMatrix::identity(4, 4) * c;
    m[(0, 2)] = s;
    m[(2, 0)] = s;
    m[(1, 3)] = -s;
    m[(3, 1)] = -s;
    CovMatrix { n_modes: 2, data: m }
}

/// Block-diagonal concatenation of two states.
pub fn direct_sum(a: &CovMatrix, b: &CovMatrix) -> CovMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut m = DMatrix::zeros(da + db, da + db);
    m.view_mut((0, 0), (da, da)).copy_from(&a.data);
    m.view_mut((da, da), (db, db)).copy_from(&b.data);
    CovMatrix { n_modes: a.n_modes + b.n_modes, data: m }
}

/// Partial transpose: flips the sign of the P quadrature of the selected
/// modes (0-based indices). An involution for a fixed mode set.
pub fn partial_transpose(gamma: &CovMatrix, modes: &[usize]) -> Result<CovMatrix> {
    let n = gamma.n_modes();
    let mut sign = alloc::vec![1.0f64; 2 * n];
    for &m in modes {
        if m >= n {
            return Err(Error::ModeIndex { index: m, n_modes: n });
        }
        sign[2 * m + 1] = -1.0;
    }
    let dim = 2 * n;
    let mut out = gamma.data.clone();
    for r in 0..dim {
        for c in 0..dim {
            out[(r, c)] *= sign[r] * sign[c];
        }
    }
    Ok(CovMatrix { n_modes: n, data: out })
}

/// Symplecticity test: max |SJS^T - J| < tol. Errors on odd dimension.
pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let (r, c) = s.shape();
    if r != c || r % 2 != 0 || r == 0 {
        return Err(Error::DimensionMismatch { expected: r + r % 2, got: c });
    }
    Ok(symplectic_deviation(s) < tol)
}

/// Max-norm deviation of SJS^T from J.
pub fn symplectic_deviation(s: &DMatrix<f64>) -> f64 {
    let j = symplectic_form(s.nrows() / 2);
    let d = s * &j * s.transpose() - &j;
    d.iter().fold(0.0f64, |acc, &x| f64::max(acc, x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symplectic_form_single_mode() {
        let j = symplectic_form(1);
        assert_eq!(j[(0, 1)], 1.0);
        assert_eq!(j[(1, 0)], -1.0);
        assert_eq!(j[(0, 0)], 0.0);
        assert_eq!(j[(1, 1)], 0.0);
    }

    #[test]
    fn symplectic_form_squares_to_minus_identity() {
        for n in [1usize, 2, 3] {
            let j = symplectic_form(n);
            let jj = &j * &j;
            assert_abs_diff_eq!(jj, -DMatrix::<f64>::identity(2 * n, 2 * n), epsilon = 0.0);
            assert_eq!(j.transpose(), -j.clone());
        }
    }

    #[test]
    fn vacuum_is_physical_half_vacuum_is_not() {
        assert!(is_physical(&CovMatrix::identity(1), PHYSICALITY_TOL));
        let half = CovMatrix::new(DMatrix::identity(2, 2) * 0.5).unwrap();
        assert!(!is_physical(&half, PHYSICALITY_TOL));
        assert_abs_diff_eq!(physicality_min_eig(&half), -0.5, epsilon = 1e-12);
        assert!(is_physical(&tmsv(1.0).unwrap(), PHYSICALITY_TOL));
    }

    #[test]
    fn construction_rejects_asymmetry_and_odd_dims() {
        let mut m = DMatrix::identity(2, 2);
        m[(0, 1)] = 1e-6;
        assert!(CovMatrix::new(m).is_err());
        assert!(CovMatrix::new(DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn symplectic_eigenvalues_of_standard_states() {
        for n in [1usize, 2, 4] {
            let s = symplectic_eigenvalues(&CovMatrix::identity(n)).unwrap();
            for &v in s.values() {
                assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
            }
        }
        let th = CovMatrix::thermal(1.0).unwrap();
        let s = symplectic_eigenvalues(&th).unwrap();
        assert_eq!(s.values().len(), 1);
        assert_abs_diff_eq!(s.values()[0], 3.0, epsilon = 1e-10);
        for nbar in [0.5, 1.0, 2.0] {
            let s = symplectic_eigenvalues(&tmsv(nbar).unwrap()).unwrap();
            assert_abs_diff_eq!(s.values()[0], 1.0, epsilon = 1e-8);
            assert_abs_diff_eq!(s.values()[1], 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn symplectic_eigenvalues_reject_indefinite_input() {
        // Z-flipped vacuum offset: J*gamma has real eigenvalues, no +/- pairs.
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -1.0]);
        assert!(symplectic_eigenvalues(&CovMatrix::new(m).unwrap()).is_err());
    }

    #[test]
    fn g_function_values() {
        assert_eq!(g_function(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(g_function(1.0).unwrap(), 2.0, epsilon = 1e-14);
        let expect = 1.5 * 1.5f64.log2() + 0.5;
        assert_abs_diff_eq!(g_function(0.5).unwrap(), expect, epsilon = 1e-14);
        assert!(g_function(-0.1).is_err());
    }

    #[test]
    fn g_function_strictly_increasing() {
        let mut prev = g_function(0.0).unwrap();
        for k in 1..=100 {
            let x = k as f64 * 0.1;
            let v = g_function(x).unwrap();
            assert!(v > prev, "g not increasing at x = {x}");
            prev = v;
        }
    }

    #[test]
    fn entropy_of_standard_states() {
        assert_abs_diff_eq!(gaussian_entropy(&CovMatrix::identity(2)).unwrap(), 0.0, epsilon = 1e-10);
        let th = CovMatrix::thermal(1.0).unwrap();
        assert_abs_diff_eq!(gaussian_entropy(&th).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gaussian_entropy(&tmsv(2.0).unwrap()).unwrap(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn entropy_zero_iff_pure() {
        for nbar in [0.0, 0.5, 1.0, 5.0] {
            let h = gaussian_entropy(&tmsv(nbar).unwrap()).unwrap();
            assert!(h.abs() < 1e-8, "tmsv({nbar}) entropy {h}");
        }
        let th = CovMatrix::thermal(0.3).unwrap();
        assert!(gaussian_entropy(&th).unwrap() > 1e-3);
    }

    #[test]
    fn entropy_rejects_unphysical() {
        let m = DMatrix::identity(2, 2) * 0.9;
        assert!(gaussian_entropy(&CovMatrix::new(m).unwrap()).is_err());
    }

    #[test]
    fn tmsv_blocks_and_purity() {
        assert_abs_diff_eq!(tmsv(0.0).unwrap().data(), &DMatrix::identity(4, 4), epsilon = 0.0);
        let t = tmsv(1.0).unwrap();
        assert_abs_diff_eq!(t.data()[(0, 0)], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t.data()[(0, 2)], 2.0 * 2.0f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(t.data()[(1, 3)], -2.0 * 2.0f64.sqrt(), epsilon = 1e-14);
        let s = symplectic_eigenvalues(&tmsv(3.0).unwrap()).unwrap();
        assert_abs_diff_eq!(s.values()[0], 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(s.values()[1], 1.0, epsilon = 1e-8);
        // Squeezing-parameter convention is pure as well.
        for r in [0.5, 1.0, 2.0] {
            let s = symplectic_eigenvalues(&tmsv_from_squeezing(r)).unwrap();
            assert_abs_diff_eq!(s.values()[0], 1.0, epsilon = 1e-8);
        }
        assert!(tmsv(-0.5).is_err());
    }

    #[test]
    fn direct_sum_concatenates() {
        let s = direct_sum(&CovMatrix::identity(1), &CovMatrix::identity(2));
        assert_eq!(s.n_modes(), 3);
        assert_abs_diff_eq!(s.data(), &DMatrix::identity(6, 6), epsilon = 0.0);

        let a = CovMatrix::thermal(0.7).unwrap();
        let b = CovMatrix::thermal(1.9).unwrap();
        let ha = gaussian_entropy(&a).unwrap();
        let hb = gaussian_entropy(&b).unwrap();
        let hs = gaussian_entropy(&direct_sum(&a, &b)).unwrap();
        assert_abs_diff_eq!(hs, ha + hb, epsilon = 1e-10);

        let spec = symplectic_eigenvalues(&direct_sum(&tmsv(1.0).unwrap(), &CovMatrix::identity(1))).unwrap();
        for &v in spec.values() {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn partial_transpose_detects_tmsv_entanglement() {
        let t = tmsv(1.0).unwrap();
        let pt = partial_transpose(&t, &[1]).unwrap();
        assert!(!is_physical(&pt, PHYSICALITY_TOL));

        let prod = CovMatrix::identity(2);
        let pt = partial_transpose(&prod, &[1]).unwrap();
        assert_eq!(pt, prod);

        let same = partial_transpose(&t, &[]).unwrap();
        assert_eq!(same, t);

        let twice = partial_transpose(&partial_transpose(&t, &[0]).unwrap(), &[0]).unwrap();
        assert_eq!(twice, t);

        assert!(partial_transpose(&t, &[2]).is_err());
    }

    #[test]
    fn is_symplectic_accepts_beamsplitter() {
        assert!(is_symplectic(&DMatrix::identity(4, 4), SYMPLECTICITY_TOL).unwrap());
        let t: f64 = 0.3;
        let (ct, st) = (t.sqrt(), (1.0 - t).sqrt());
        let mut bs = DMatrix::zeros(4, 4);
        for k in 0..2 {
            bs[(k, k)] = ct;
            bs[(k, k + 2)] = st;
            bs[(k + 2, k)] = st;
            bs[(k + 2, k + 2)] = -ct;
        }
        assert!(is_symplectic(&bs, SYMPLECTICITY_TOL).unwrap());
        assert!(!is_symplectic(&(bs * 1.01), SYMPLECTICITY_TOL).unwrap());
        assert!(is_symplectic(&DMatrix::identity(3, 3), SYMPLECTICITY_TOL).is_err());
    }

    #[test]
    fn spectrum_invariant_under_symplectic_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = 1 + (rand::Rng::gen_range(&mut rng, 0..3)) as usize;
            let gamma = sampling::random_physical_cov(n, &mut rng);
            let base = symplectic_eigenvalues(&gamma).unwrap();
            for _ in 0..20 {
                let t = sampling::random_symplectic(n, &mut rng);
                let conj = CovMatrix::new(&t * gamma.data() * t.transpose()).unwrap();
                let s = symplectic_eigenvalues(&conj).unwrap();
                for (a, b) in s.values().iter().zip(base.values()) {
                    assert_abs_diff_eq!(a, b, epsilon = 1e-8);
                }
            }
        }
    }

    #[test]
    fn physical_implies_spectrum_above_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let n = 1 + (rand::Rng::gen_range(&mut rng, 0..3)) as usize;
            let gamma = sampling::random_physical_cov(n, &mut rng);
            assert!(is_physical(&gamma, PHYSICALITY_TOL));
            assert!(symplectic_eigenvalues(&gamma).unwrap().min() >= 1.0 - 1e-8);
        }
    }

    #[test]
    fn known_spectrum_from_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let (gamma, mut nus) = sampling::random_physical_cov_with_spectrum(3, &mut rng);
            nus.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
            let s = symplectic_eigenvalues(&gamma).unwrap();
            for (a, b) in s.values().iter().zip(nus.iter()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-8);
            }
        }
    }
}
