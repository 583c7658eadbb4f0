//! Finite-dimensional channel calculus: density matrices, Kraus channels,
//! complementary outputs via the Kraus Gram matrix, and a seeded maximizer
//! of coherent information. Used to check the entanglement-breaking
//! additivity statement I_c(EB (x) Psi) = I_c(Psi) at qubit/qutrit scale,
//! where everything is exactly computable.

use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
// float math resolves through the trait in no_std builds; tests link std
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::neldermead::{self, NmOptions};
use crate::{Error, Result};

/// Total input dimension cap for the maximizers; keeps every verification
/// at desk scale.
pub const FD_DIM_BUDGET: usize = 9;
/// Slack allowed when comparing the two maximized sides of the additivity
/// check; both are approximate maxima.
pub const EB_ADDITIVITY_TOL: f64 = 1e-3;

const HERMITICITY_TOL: f64 = 1e-12;
const EIGENVALUE_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

type CMatrix = DMatrix<Complex<f64>>;
type CVector = DVector<Complex<f64>>;

fn zero() -> Complex<f64> {
    Complex::new(0.0, 0.0)
}

/// A validated density operator.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    data: CMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, positive semidefiniteness, and unit trace.
    pub fn new(data: CMatrix) -> Result<Self> {
        let (r, c) = data.shape();
        if r != c || r == 0 {
            return Err(Error::DimensionMismatch { expected: r, got: c });
        }
        let mut herm_dev: f64 = 0.0;
        for i in 0..r {
            for j in 0..r {
                herm_dev = herm_dev.max((data[(i, j)] - data[(j, i)].conj()).norm());
            }
        }
        if herm_dev > HERMITICITY_TOL {
            return Err(Error::Unphysical { min_eig: -herm_dev });
        }
        let trace = data.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::OutOfRange { what: "density trace", value: trace.re });
        }
        let min_eig = hermitian_min_eig(&data);
        if min_eig < -EIGENVALUE_TOL {
            return Err(Error::Unphysical { min_eig });
        }
        Ok(DensityMatrix { dim: r, data })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let m = CMatrix::identity(dim, dim) * Complex::new(1.0 / dim as f64, 0.0);
        DensityMatrix::new(m)
    }

    /// Projector onto a normalized ket.
    pub fn pure(ket: &CVector) -> Result<Self> {
        let norm = ket.norm();
        if !(norm > 0.0) {
            return Err(Error::OutOfRange { what: "ket norm", value: norm });
        }
        let k = ket / Complex::new(norm, 0.0);
        DensityMatrix::new(&k * k.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        vn_entropy(&self.data)
    }
}

fn hermitian_min_eig(m: &CMatrix) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Entropy of a Hermitian PSD matrix, clamping roundoff-negative eigenvalues.
fn vn_entropy(m: &CMatrix) -> f64 {
    let eig = SymmetricEigen::new(m.clone()).eigenvalues;
    let mut h = 0.0;
    for &lambda in eig.iter() {
        if lambda > 1e-12 {
            h -= lambda * lambda.log2();
        }
    }
    h
}

/// A channel in Kraus form. The environment dimension equals the Kraus
/// count (minimal dilation convention).
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMatrix>,
}

impl KrausChannel {
    /// Validates shape agreement and trace preservation sum K^dag K = I.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::DimensionMismatch { expected: 1, got: 0 })?;
        let (dim_out, dim_in) = first.shape();
        if dim_out == 0 || dim_in == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let mut sum = CMatrix::zeros(dim_in, dim_in);
        for k in &kraus {
            if k.shape() != (dim_out, dim_in) {
                return Err(Error::DimensionMismatch { expected: dim_out, got: k.nrows() });
            }
            sum += k.adjoint() * k;
        }
        let dev = (&sum - CMatrix::identity(dim_in, dim_in))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > 1e-10 {
            return Err(Error::NotSymplectic { max_dev: dev });
        }
        Ok(KrausChannel { dim_in, dim_out, kraus })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        KrausChannel::new(alloc::vec![CMatrix::identity(dim, dim)])
    }

    /// Qubit phase-flip channel: {sqrt(1-p) I, sqrt(p) Z}.
    pub fn dephasing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange { what: "dephasing probability", value: p });
        }
        let mut z = CMatrix::identity(2, 2);
        z[(1, 1)] = Complex::new(-1.0, 0.0);
        KrausChannel::new(alloc::vec![
            CMatrix::identity(2, 2) * Complex::new((1.0 - p).sqrt(), 0.0),
            z * Complex::new(p.sqrt(), 0.0),
        ])
    }

    /// Qubit depolarizing channel with error weight p spread over X, Y, Z.
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange { what: "depolarizing probability", value: p });
        }
        let i = CMatrix::identity(2, 2);
        let mut x = CMatrix::zeros(2, 2);
        x[(0, 1)] = Complex::new(1.0, 0.0);
        x[(1, 0)] = Complex::new(1.0, 0.0);
        let mut y = CMatrix::zeros(2, 2);
        y[(0, 1)] = Complex::new(0.0, -1.0);
        y[(1, 0)] = Complex::new(0.0, 1.0);
        let mut z = CMatrix::identity(2, 2);
        z[(1, 1)] = Complex::new(-1.0, 0.0);
        let w = Complex::new((p / 4.0).sqrt(), 0.0);
        KrausChannel::new(alloc::vec![
            i * Complex::new((1.0 - 3.0 * p / 4.0).sqrt(), 0.0),
            x * w,
            y * w,
            z * w,
        ])
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn dim_env(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.kraus
    }
}

fn output_matrix(ch: &KrausChannel, rho: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(ch.dim_out, ch.dim_out);
    for k in &ch.kraus {
        out += k * rho * k.adjoint();
    }
    out
}

/// Environment reduction from the Kraus Gram structure:
/// entry (k, j) = Tr(K_j rho K_k^dag).
fn environment_matrix(ch: &KrausChannel, rho: &CMatrix) -> CMatrix {
    let n = ch.kraus.len();
    let pushed: Vec<CMatrix> = ch.kraus.iter().map(|k| k * rho).collect();
    let mut env = CMatrix::zeros(n, n);
    for k in 0..n {
        for j in 0..n {
            let mut tr = zero();
            for r in 0..ch.dim_out {
                for c in 0..ch.dim_in {
                    tr += pushed[j][(r, c)] * ch.kraus[k][(r, c)].conj();
                }
            }
            env[(k, j)] = tr;
        }
    }
    env
}

/// Channel action sum K rho K^dag, validated as a density matrix.
pub fn apply_fd(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ch.dim_in {
        return Err(Error::DimensionMismatch { expected: ch.dim_in, got: rho.dim() });
    }
    DensityMatrix::new(output_matrix(ch, rho.data()))
}

/// Complementary-channel action, validated as a density matrix.
pub fn complementary_fd(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ch.dim_in {
        return Err(Error::DimensionMismatch { expected: ch.dim_in, got: rho.dim() });
    }
    DensityMatrix::new(environment_matrix(ch, rho.data()))
}

/// H(output) - H(environment) in bits.
pub fn coherent_info_fd(ch: &KrausChannel, rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != ch.dim_in {
        return Err(Error::DimensionMismatch { expected: ch.dim_in, got: rho.dim() });
    }
    Ok(ci_raw(ch, rho.data()))
}

fn ci_raw(ch: &KrausChannel, rho: &CMatrix) -> f64 {
    vn_entropy(&output_matrix(ch, rho)) - vn_entropy(&environment_matrix(ch, rho))
}

/// H(input) + H(output) - H(environment) in bits.
pub fn mutual_info_fd(ch: &KrausChannel, rho: &DensityMatrix) -> Result<f64> {
    Ok(rho.entropy() + coherent_info_fd(ch, rho)?)
}

/// Kronecker product channel: Kraus list {K_i (x) L_j}, i outer.
pub fn tensor_fd(ch1: &KrausChannel, ch2: &KrausChannel) -> Result<KrausChannel> {
    let mut kraus = Vec::with_capacity(ch1.kraus.len() * ch2.kraus.len());
    for k in &ch1.kraus {
        for l in &ch2.kraus {
            kraus.push(k.kronecker(l));
        }
    }
    KrausChannel::new(kraus)
}

/// A measure-and-prepare (hence entanglement-breaking) channel together with
/// its construction record.
#[derive(Debug, Clone)]
pub struct EBChannel {
    underlying: KrausChannel,
    basis: Vec<CVector>,
    preparations: Vec<CVector>,
}

impl EBChannel {
    pub fn channel(&self) -> &KrausChannel {
        &self.underlying
    }

    /// The orthonormal measurement basis.
    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    /// The pure states prepared per outcome.
    pub fn preparations(&self) -> &[CVector] {
        &self.preparations
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex<f64> {
    Complex::new(normal(rng), normal(rng))
}

fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    g.qr().q()
}

/// Measure in a seeded-random orthonormal basis, prepare a seeded-random
/// pure state per outcome: Kraus K_k = |phi_k><b_k|, all rank 1, which
/// certifies the channel entanglement-breaking by construction.
pub fn eb_channel_cq(dim: usize, seed: u64) -> Result<EBChannel> {
    if dim < 2 {
        return Err(Error::OutOfRange { what: "eb channel dimension", value: dim as f64 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_unitary(dim, &mut rng);
    let basis: Vec<CVector> = (0..dim).map(|k| q.column(k).into_owned()).collect();
    let preparations: Vec<CVector> = (0..dim)
        .map(|_| {
            let v = CVector::from_fn(dim, |_, _| complex_gaussian(&mut rng));
            let n = v.norm();
            v / Complex::new(n, 0.0)
        })
        .collect();
    let kraus: Vec<CMatrix> =
        basis.iter().zip(&preparations).map(|(b, phi)| phi * b.adjoint()).collect();
    Ok(EBChannel { underlying: KrausChannel::new(kraus)?, basis, preparations })
}

/// Builds the density matrix L L^dag / Tr from d^2 real Cholesky-factor
/// parameters: d diagonal entries followed by (re, im) pairs for the strict
/// lower triangle in row-major order.
fn density_from_params(dim: usize, params: &[f64]) -> CMatrix {
    let mut l = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        l[(i, i)] = Complex::new(params[i], 0.0);
    }
    let mut idx = dim;
    for r in 1..dim {
        for c in 0..r {
            l[(r, c)] = Complex::new(params[idx], params[idx + 1]);
            idx += 2;
        }
    }
    let rho = &l * l.adjoint();
    let tr = rho.trace().re;
    if tr > 1e-30 {
        rho / Complex::new(tr, 0.0)
    } else {
        CMatrix::identity(dim, dim) * Complex::new(1.0 / dim as f64, 0.0)
    }
}

/// Maximum coherent information over input states: `trials` seeded random
/// starts, each refined by simplex ascent on the Cholesky parameterization,
/// floored at zero (pure inputs always achieve zero). Deterministic given
/// the seed; trial t uses seed + t.
pub fn max_coherent_info_fd(ch: &KrausChannel, trials: usize, seed: u64) -> Result<f64> {
    if ch.dim_in > FD_DIM_BUDGET {
        return Err(Error::BudgetExceeded { dim: ch.dim_in, max: FD_DIM_BUDGET });
    }
    if trials == 0 {
        return Err(Error::OutOfRange { what: "maximizer trials", value: 0.0 });
    }
    let d = ch.dim_in;
    let n_params = d * d;
    let opts = NmOptions { max_iters: 2000, f_tol: 1e-10 };
    let steps = alloc::vec![0.25; n_params];
    let mut best = 0.0f64;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
        let x0: Vec<f64> = (0..n_params).map(|_| normal(&mut rng)).collect();
        let r = neldermead::minimize(
            |p| -ci_raw(ch, &density_from_params(d, p)),
            &x0,
            &steps,
            |_| {},
            &opts,
        );
        if -r.f > best {
            best = -r.f;
        }
    }
    Ok(best)
}

/// Outcome of one additivity check.
#[derive(Debug, Clone, Copy)]
pub struct EbAdditivityReport {
    pub dim_eb: usize,
    pub product_dim: usize,
    /// Maximized coherent information of EB (x) Psi.
    pub lhs: f64,
    /// Maximized coherent information of Psi alone.
    pub rhs: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Numerical check of I_c(EB (x) Psi) = I_c(Psi): builds a seeded
/// measure-and-prepare channel of dimension `dim_eb`, maximizes both sides
/// with the same budget, and passes when the product side does not exceed
/// the single side beyond [`EB_ADDITIVITY_TOL`].
pub fn verify_eb_additivity(
    dim_eb: usize,
    psi: &KrausChannel,
    trials: usize,
    seed: u64,
) -> Result<EbAdditivityReport> {
    let product_dim = dim_eb * psi.dim_in();
    if product_dim > FD_DIM_BUDGET {
        return Err(Error::BudgetExceeded { dim: product_dim, max: FD_DIM_BUDGET });
    }
    let eb = eb_channel_cq(dim_eb, seed)?;
    let product = tensor_fd(eb.channel(), psi)?;
    let lhs = max_coherent_info_fd(&product, trials, seed)?;
    let rhs = max_coherent_info_fd(psi, trials, seed)?;
    Ok(EbAdditivityReport {
        dim_eb,
        product_dim,
        lhs,
        rhs,
        tol: EB_ADDITIVITY_TOL,
        pass: lhs <= rhs + EB_ADDITIVITY_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn random_density(dim: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
        let l = CMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
        let rho = &l * l.adjoint();
        let tr = rho.trace().re;
        DensityMatrix::new(rho / Complex::new(tr, 0.0)).unwrap()
    }

    fn random_kraus_channel(
        dim_in: usize,
        dim_out: usize,
        n_kraus: usize,
        rng: &mut ChaCha8Rng,
    ) -> KrausChannel {
        // economy QR of a tall Gaussian block gives an isometry; its row
        // blocks are a valid Kraus list
        let g = CMatrix::from_fn(dim_out * n_kraus, dim_in, |_, _| complex_gaussian(rng));
        let q = g.qr().q();
        let kraus: Vec<CMatrix> =
            (0..n_kraus).map(|k| q.view((k * dim_out, 0), (dim_out, dim_in)).into_owned()).collect();
        KrausChannel::new(kraus).unwrap()
    }

    fn bloch_state(r: f64, theta: f64, phi: f64) -> DensityMatrix {
        let (x, y, z) =
            (r * theta.sin() * phi.cos(), r * theta.sin() * phi.sin(), r * theta.cos());
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = Complex::new((1.0 + z) / 2.0, 0.0);
        m[(1, 1)] = Complex::new((1.0 - z) / 2.0, 0.0);
        m[(0, 1)] = Complex::new(x / 2.0, -y / 2.0);
        m[(1, 0)] = Complex::new(x / 2.0, y / 2.0);
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn density_validation_catches_defects() {
        let mut bad = CMatrix::identity(2, 2) * Complex::new(0.5, 0.0);
        bad[(0, 1)] = Complex::new(0.1, 0.0);
        assert!(DensityMatrix::new(bad).is_err()); // not Hermitian

        let mut neg = CMatrix::zeros(2, 2);
        neg[(0, 0)] = Complex::new(1.5, 0.0);
        neg[(1, 1)] = Complex::new(-0.5, 0.0);
        assert!(DensityMatrix::new(neg).is_err()); // negative eigenvalue

        assert!(DensityMatrix::new(CMatrix::identity(2, 2)).is_err()); // trace 2
        assert!(DensityMatrix::maximally_mixed(3).is_ok());
    }

    #[test]
    fn identity_channel_is_transparent() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let id = KrausChannel::identity(3).unwrap();
        for _ in 0..5 {
            let rho = random_density(3, &mut rng);
            let out = apply_fd(&id, &rho).unwrap();
            let dev =
                (out.data() - rho.data()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(dev < 1e-12);
        }
        let env = complementary_fd(&id, &random_density(3, &mut rng)).unwrap();
        assert_eq!(env.dim(), 1);
        assert_abs_diff_eq!(env.data()[(0, 0)].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn full_depolarizing_pins_the_output() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let ch = KrausChannel::depolarizing(1.0).unwrap();
        for _ in 0..5 {
            let rho = random_density(2, &mut rng);
            let out = apply_fd(&ch, &rho).unwrap();
            let target = CMatrix::identity(2, 2) * Complex::new(0.5, 0.0);
            let dev = (out.data() - target).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(dev < 1e-12);
        }
    }

    #[test]
    fn outputs_stay_density_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..100 {
            let dim_in = 2 + (rng.gen::<u32>() % 2) as usize;
            let dim_out = 2 + (rng.gen::<u32>() % 2) as usize;
            // completeness needs n_kraus * dim_out >= dim_in
            let n_kraus = dim_in.div_ceil(dim_out) + (rng.gen::<u32>() % 3) as usize;
            let ch = random_kraus_channel(dim_in, dim_out, n_kraus, &mut rng);
            let rho = random_density(dim_in, &mut rng);
            // constructors re-validate PSD and unit trace
            apply_fd(&ch, &rho).unwrap();
            complementary_fd(&ch, &rho).unwrap();
        }
    }

    #[test]
    fn pure_inputs_balance_entropies() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..20 {
            let ch = random_kraus_channel(3, 2, 3, &mut rng);
            let ket = CVector::from_fn(3, |_, _| complex_gaussian(&mut rng));
            let rho = DensityMatrix::pure(&ket).unwrap();
            let h_out = apply_fd(&ch, &rho).unwrap().entropy();
            let h_env = complementary_fd(&ch, &rho).unwrap().entropy();
            assert_abs_diff_eq!(h_out, h_env, epsilon = 1e-10);
            assert_abs_diff_eq!(coherent_info_fd(&ch, &rho).unwrap(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn dephasing_complementary_of_the_mixed_state() {
        let ch = KrausChannel::dephasing(0.5).unwrap();
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let env = complementary_fd(&ch, &rho).unwrap();
        assert_eq!(env.dim(), 2);
        let target = CMatrix::identity(2, 2) * Complex::new(0.5, 0.0);
        let dev = (env.data() - target).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-12);
    }

    #[test]
    fn coherent_and_mutual_info_reference_values() {
        let id = KrausChannel::identity(2).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert_abs_diff_eq!(coherent_info_fd(&id, &mixed).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mutual_info_fd(&id, &mixed).unwrap(), 2.0, epsilon = 1e-12);

        // classical measure-and-prepare in the computational basis
        let mut k0 = CMatrix::zeros(2, 2);
        k0[(0, 0)] = Complex::new(1.0, 0.0);
        let mut k1 = CMatrix::zeros(2, 2);
        k1[(1, 1)] = Complex::new(1.0, 0.0);
        let cq = KrausChannel::new(alloc::vec![k0, k1]).unwrap();
        assert_abs_diff_eq!(coherent_info_fd(&cq, &mixed).unwrap(), 0.0, epsilon = 1e-12);

        // Def-consistency on random pairs
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for _ in 0..20 {
            let ch = random_kraus_channel(2, 3, 2, &mut rng);
            let rho = random_density(2, &mut rng);
            let ci = coherent_info_fd(&ch, &rho).unwrap();
            let mi = mutual_info_fd(&ch, &rho).unwrap();
            assert_abs_diff_eq!(mi - rho.entropy(), ci, epsilon = 1e-10);
        }
    }

    #[test]
    fn eb_construction_is_rank_one_and_trace_preserving() {
        for (dim, seed) in [(2usize, 0u64), (3, 7)] {
            let eb = eb_channel_cq(dim, seed).unwrap();
            assert_eq!(eb.channel().dim_env(), dim);
            let mut sum = CMatrix::zeros(dim, dim);
            for k in eb.channel().kraus_ops() {
                sum += k.adjoint() * k;
                let sv = k.clone().svd(false, false).singular_values;
                let mut sorted: Vec<f64> = sv.iter().copied().collect();
                sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
                assert!(sorted[0] > 0.1);
                for &s in &sorted[1..] {
                    assert!(s < 1e-10, "kraus rank above one: sigma {s}");
                }
            }
            let dev = (&sum - CMatrix::identity(dim, dim))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-12);
        }
    }

    #[test]
    fn eb_channel_has_no_coherent_information() {
        let eb = eb_channel_cq(2, 0).unwrap();
        let mut worst = f64::NEG_INFINITY;
        for i in 0..25 {
            let theta = core::f64::consts::PI * i as f64 / 24.0;
            for j in 0..20 {
                let phi = core::f64::consts::TAU * j as f64 / 20.0;
                let rho = bloch_state(1.0, theta, phi);
                worst = worst.max(coherent_info_fd(eb.channel(), &rho).unwrap());
            }
        }
        assert!(worst <= 1e-6, "max coherent info over Bloch sphere: {worst}");
    }

    #[test]
    fn tensor_factorizes_on_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let id = KrausChannel::identity(2).unwrap();
        let both = tensor_fd(&id, &id).unwrap();
        let rho = random_density(4, &mut rng);
        let out = apply_fd(&both, &rho).unwrap();
        let dev = (out.data() - rho.data()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-12);

        let ch1 = random_kraus_channel(2, 2, 2, &mut rng);
        let ch2 = random_kraus_channel(2, 2, 3, &mut rng);
        let joint = tensor_fd(&ch1, &ch2).unwrap();
        assert_eq!(joint.dim_env(), 6);
        let r1 = random_density(2, &mut rng);
        let r2 = random_density(2, &mut rng);
        let lhs = apply_fd(&joint, &DensityMatrix::new(r1.data().kronecker(r2.data())).unwrap())
            .unwrap();
        let rhs = apply_fd(&ch1, &r1).unwrap().data().kronecker(apply_fd(&ch2, &r2).unwrap().data());
        let dev = (lhs.data() - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-10);
    }

    #[test]
    fn maximizer_finds_known_optima() {
        let id = KrausChannel::identity(2).unwrap();
        let best = max_coherent_info_fd(&id, 4, 123).unwrap();
        assert_abs_diff_eq!(best, 1.0, epsilon = 1e-4);

        for seed in [0u64, 1, 2] {
            let eb = eb_channel_cq(2, seed).unwrap();
            let best = max_coherent_info_fd(eb.channel(), 4, 123).unwrap();
            assert!(best <= 1e-4, "seed {seed}: {best}");
        }
    }

    #[test]
    fn maximizer_matches_grid_oracle_on_dephasing() {
        let ch = KrausChannel::dephasing(0.5).unwrap();
        let mut grid_best = f64::NEG_INFINITY;
        for ri in 1..=10 {
            let r = ri as f64 / 10.0;
            for ti in 0..10 {
                let theta = core::f64::consts::PI * ti as f64 / 9.0;
                for pi in 0..5 {
                    let phi = core::f64::consts::TAU * pi as f64 / 5.0;
                    let rho = bloch_state(r, theta, phi);
                    grid_best = grid_best.max(coherent_info_fd(&ch, &rho).unwrap());
                }
            }
        }
        let grid_best = grid_best.max(0.0);
        let opt = max_coherent_info_fd(&ch, 4, 7).unwrap();
        assert_abs_diff_eq!(opt, grid_best, epsilon = 1e-3);
    }

    #[test]
    fn maximizer_enforces_the_dimension_budget() {
        let id = KrausChannel::identity(16).unwrap();
        match max_coherent_info_fd(&id, 1, 0) {
            Err(crate::Error::BudgetExceeded { dim: 16, max: 9 }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn additivity_check_passes_across_seeds_and_channels() {
        let psis = [
            KrausChannel::identity(2).unwrap(),
            KrausChannel::dephasing(0.3).unwrap(),
            KrausChannel::depolarizing(0.5).unwrap(),
        ];
        for (i, psi) in psis.iter().enumerate() {
            for seed in [0u64, 1, 2] {
                let report = verify_eb_additivity(2, psi, 3, seed).unwrap();
                assert!(
                    report.pass,
                    "psi {i}, seed {seed}: lhs {} rhs {}",
                    report.lhs, report.rhs
                );
            }
        }
        let report = verify_eb_additivity(3, &KrausChannel::identity(2).unwrap(), 2, 2).unwrap();
        assert!(report.pass);
        assert_eq!(report.product_dim, 6);
    }

    #[test]
    fn additivity_check_enforces_the_budget() {
        let psi = KrausChannel::identity(4).unwrap();
        assert!(matches!(
            verify_eb_additivity(3, &psi, 1, 0),
            Err(crate::Error::BudgetExceeded { dim: 12, max: 9 })
        ));
    }
}
