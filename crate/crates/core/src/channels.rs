//! Gaussian channels as symplectic dilations: thermal attenuator, thermal
//! amplifier, a two-mode PPT channel family, and their combination.
//!
//! A channel is stored as the block decomposition of a symplectic matrix
//! S = [[X, Z], [X_c, Z_c]] acting on (input + environment) quadratures,
//! together with a pure environment covariance. Thermal environments are
//! purified by a two-mode squeezed vacuum so the complementary channel is
//! the true one (it sees the purifying mode), not the weak one.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, SymmetricEigen};
// float math resolves through the trait in no_std builds; tests link std
#[allow(unused_imports)]
use num_traits::Float;

use crate::symplectic::{
    self, direct_sum, symplectic_form, tmsv, CovMatrix, PHYSICALITY_TOL,
};
use crate::{Error, Result};

/// Construction-time tolerance for the stacked dilation being symplectic.
pub const STACKED_SYMPLECTIC_TOL: f64 = 1e-9;
/// Environment states must be pure: symplectic eigenvalues within this of 1.
pub const ENV_PURITY_TOL: f64 = 1e-8;
/// Eigenvalue tolerance for the complete-positivity condition
/// Y + i(J - XJX^T) >= 0.
pub const CPTP_TOL: f64 = 1e-8;
/// Slack accepted on the physicality boundary y >= |tau - 1| when converting
/// plane coordinates to channel parameters.
pub const PLANE_BOUNDARY_TOL: f64 = 1e-12;

/// A Gaussian channel given by its symplectic dilation blocks and a pure
/// environment state.
///
/// The channel maps gamma to X gamma X^T + Z env Z^T and its complementary
/// channel maps gamma to X_c gamma X_c^T + Z_c env Z_c^T.
#[derive(Debug, Clone)]
pub struct DilatedChannel {
    n_in: usize,
    n_out: usize,
    n_env: usize,
    x: DMatrix<f64>,
    z: DMatrix<f64>,
    xc: DMatrix<f64>,
    zc: DMatrix<f64>,
    env_cov: CovMatrix,
    /// cached Z env Z^T
    y: DMatrix<f64>,
    /// cached Z_c env Z_c^T
    yc: DMatrix<f64>,
    label: String,
}

impl DilatedChannel {
    /// Validates and assembles a dilation.
    ///
    /// Checks block shapes, that the stacked [[X,Z],[X_c,Z_c]] is symplectic
    /// within [`STACKED_SYMPLECTIC_TOL`], that the environment is pure, and
    /// that the induced (X, Y) map is completely positive.
    pub fn new(
        x: DMatrix<f64>,
        z: DMatrix<f64>,
        xc: DMatrix<f64>,
        zc: DMatrix<f64>,
        env_cov: CovMatrix,
        label: String,
    ) -> Result<Self> {
        let (xr, xc_cols) = x.shape();
        if xr % 2 != 0 || xc_cols % 2 != 0 || xr == 0 {
            return Err(Error::DimensionMismatch { expected: xr + 1, got: xc_cols });
        }
        let n_out = xr / 2;
        let n_in = xc_cols / 2;
        let n_env = env_cov.n_modes();
        let de = 2 * n_env;
        if z.shape() != (2 * n_out, de) {
            return Err(Error::DimensionMismatch { expected: 2 * n_out, got: z.nrows() });
        }
        if xc.shape() != (de, 2 * n_in) {
            return Err(Error::DimensionMismatch { expected: de, got: xc.nrows() });
        }
        if zc.shape() != (de, de) {
            return Err(Error::DimensionMismatch { expected: de, got: zc.nrows() });
        }
        if n_in + n_env != n_out + n_env {
            return Err(Error::DimensionMismatch { expected: n_in, got: n_out });
        }

        let spectrum = symplectic::symplectic_eigenvalues(&env_cov)?;
        for &nu in spectrum.values() {
            if (nu - 1.0).abs() > ENV_PURITY_TOL {
                return Err(Error::Unphysical { min_eig: nu - 1.0 });
            }
        }

        let stacked = stack_blocks(&x, &z, &xc, &zc);
        let dev = symplectic::symplectic_deviation(&stacked);
        if dev > STACKED_SYMPLECTIC_TOL {
            return Err(Error::NotSymplectic { max_dev: dev });
        }

        let y = symmetrize(&(&z * env_cov.data() * z.transpose()));
        let yc = symmetrize(&(&zc * env_cov.data() * zc.transpose()));

        let cptp = cptp_min_eig(&x, &y, n_in, n_out);
        if cptp < -CPTP_TOL {
            return Err(Error::Unphysical { min_eig: cptp });
        }

        Ok(DilatedChannel { n_in, n_out, n_env, x, z, xc, zc, env_cov, y, yc, label })
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn n_env(&self) -> usize {
        self.n_env
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn z(&self) -> &DMatrix<f64> {
        &self.z
    }

    pub fn xc(&self) -> &DMatrix<f64> {
        &self.xc
    }

    pub fn zc(&self) -> &DMatrix<f64> {
        &self.zc
    }

    pub fn env_cov(&self) -> &CovMatrix {
        &self.env_cov
    }

    /// The noise block Y = Z env Z^T of the induced (X, Y) map.
    pub fn noise_block(&self) -> &DMatrix<f64> {
        &self.y
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The full dilation matrix [[X, Z], [X_c, Z_c]].
    pub fn stacked(&self) -> DMatrix<f64> {
        stack_blocks(&self.x, &self.z, &self.xc, &self.zc)
    }

    /// Minimum eigenvalue of Y + i(J - XJX^T); >= -tol for a CPTP map.
    pub fn cptp_min_eig(&self) -> f64 {
        cptp_min_eig(&self.x, &self.y, self.n_in, self.n_out)
    }

    /// Channel action on a physical input state.
    pub fn apply(&self, gamma: &CovMatrix) -> Result<CovMatrix> {
        self.check_input(gamma)?;
        Ok(self.apply_unchecked(gamma))
    }

    /// Complementary-channel action (environment output) on a physical input.
    pub fn apply_complementary(&self, gamma: &CovMatrix) -> Result<CovMatrix> {
        self.check_input(gamma)?;
        Ok(self.apply_complementary_unchecked(gamma))
    }

    fn check_input(&self, gamma: &CovMatrix) -> Result<()> {
        if gamma.n_modes() != self.n_in {
            return Err(Error::DimensionMismatch { expected: self.n_in, got: gamma.n_modes() });
        }
        let min_eig = symplectic::physicality_min_eig(gamma);
        if min_eig < -PHYSICALITY_TOL {
            return Err(Error::Unphysical { min_eig });
        }
        Ok(())
    }

    pub(crate) fn apply_unchecked(&self, gamma: &CovMatrix) -> CovMatrix {
        let m = symmetrize(&(&self.x * gamma.data() * self.x.transpose() + &self.y));
        CovMatrix::new(m).expect("X gamma X^T + Y is symmetric by construction")
    }

    pub(crate) fn apply_complementary_unchecked(&self, gamma: &CovMatrix) -> CovMatrix {
        let m = symmetrize(&(&self.xc * gamma.data() * self.xc.transpose() + &self.yc));
        CovMatrix::new(m).expect("Xc gamma Xc^T + Yc is symmetric by construction")
    }
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn stack_blocks(
    x: &DMatrix<f64>,
    z: &DMatrix<f64>,
    xc: &DMatrix<f64>,
    zc: &DMatrix<f64>,
) -> DMatrix<f64> {
    let (top, left) = x.shape();
    let (bot, right) = zc.shape();
    let mut s = DMatrix::zeros(top + bot, left + right);
    s.view_mut((0, 0), x.shape()).copy_from(x);
    s.view_mut((0, left), z.shape()).copy_from(z);
    s.view_mut((top, 0), xc.shape()).copy_from(xc);
    s.view_mut((top, left), zc.shape()).copy_from(zc);
    s
}

fn cptp_min_eig(x: &DMatrix<f64>, y: &DMatrix<f64>, n_in: usize, n_out: usize) -> f64 {
    let j_in = symplectic_form(n_in);
    let j_out = symplectic_form(n_out);
    let im = &j_out - x * j_in * x.transpose();
    let dim = 2 * n_out;
    let mut h = DMatrix::from_element(dim, dim, Complex::new(0.0, 0.0));
    for r in 0..dim {
        for c in 0..dim {
            h[(r, c)] = Complex::new(y[(r, c)], im[(r, c)]);
        }
    }
    SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Conjugates gamma_in (+) env by the full stacked dilation and extracts the
/// output and environment blocks. A deliberately independent code path from
/// `apply`, used to cross-check it.
pub fn full_dilation_oracle(ch: &DilatedChannel, gamma: &CovMatrix) -> (CovMatrix, CovMatrix) {
    let s = ch.stacked();
    let full = direct_sum(gamma, ch.env_cov());
    let conj = &s * full.data() * s.transpose();
    let d_out = 2 * ch.n_out();
    let d_env = 2 * ch.n_env();
    let out = conj.view((0, 0), (d_out, d_out)).into_owned();
    let com = conj.view((d_out, d_out), (d_env, d_env)).into_owned();
    (
        CovMatrix::new(symmetrize(&out)).expect("block of a symmetric matrix"),
        CovMatrix::new(symmetrize(&com)).expect("block of a symmetric matrix"),
    )
}

/// Thermal attenuator of transmissivity t and environment photon number nbar:
/// a beamsplitter against one arm of a TMSV purification. 1 input mode,
/// 1 output mode, 2 environment modes.
pub fn attenuator(t: f64, nbar: f64) -> Result<DilatedChannel> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::OutOfRange { what: "attenuator transmissivity", value: t });
    }
    if !(nbar >= 0.0) {
        return Err(Error::OutOfRange { what: "attenuator nbar", value: nbar });
    }
    let (st, sr) = (t.sqrt(), (1.0 - t).sqrt());
    let i2 = DMatrix::<f64>::identity(2, 2);

    let x = &i2 * st;
    let mut z = DMatrix::zeros(2, 4);
    z.view_mut((0, 0), (2, 2)).copy_from(&(&i2 * sr));
    let mut xc = DMatrix::zeros(4, 2);
    xc.view_mut((0, 0), (2, 2)).copy_from(&(&i2 * sr));
    let mut zc = DMatrix::identity(4, 4);
    zc.view_mut((0, 0), (2, 2)).copy_from(&(&i2 * -st));

    DilatedChannel::new(x, z, xc, zc, tmsv(nbar)?, format!("attenuator(t={t}, nbar={nbar})"))
}

/// Thermal amplifier of gain g and environment photon number nbar: two-mode
/// squeezing against one arm of a TMSV purification. 1 input mode, 1 output
/// mode, 2 environment modes.
pub fn amplifier(g: f64, nbar: f64) -> Result<DilatedChannel> {
    if !(g > 1.0) {
        return Err(Error::OutOfRange { what: "amplifier gain", value: g });
    }
    if !(nbar >= 0.0) {
        return Err(Error::OutOfRange { what: "amplifier nbar", value: nbar });
    }
    let (sg, sm) = (g.sqrt(), (g - 1.0).sqrt());
    let i2 = DMatrix::<f64>::identity(2, 2);
    let zdiag = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[1.0, -1.0]));

    let x = &i2 * sg;
    let mut z = DMatrix::zeros(2, 4);
    z.view_mut((0, 0), (2, 2)).copy_from(&(&zdiag * sm));
    let mut xc = DMatrix::zeros(4, 2);
    xc.view_mut((0, 0), (2, 2)).copy_from(&(&zdiag * sm));
    let mut zc = DMatrix::identity(4, 4);
    zc.view_mut((0, 0), (2, 2)).copy_from(&(&i2 * sg));

    DilatedChannel::new(x, z, xc, zc, tmsv(nbar)?, format!("amplifier(g={g}, nbar={nbar})"))
}

/// The 8x8 symplectic generator of the two-mode PPT channel family,
/// parameterized by a, b >= 1. Entries are exact closed forms, so the matrix
/// is symplectic to machine precision for all parameters.
pub fn ppt_symplectic_matrix(a: f64, b: f64) -> Result<DMatrix<f64>> {
    if !(a >= 1.0) {
        return Err(Error::OutOfRange { what: "ppt parameter a", value: a });
    }
    if !(b >= 1.0) {
        return Err(Error::OutOfRange { what: "ppt parameter b", value: b });
    }
    let s3 = 3.0f64.sqrt();
    let s6 = 6.0f64.sqrt();
    let s2 = 2.0f64.sqrt();
    let a1 = (a * a - 1.0) / (2.0 * a);
    let a2 = (a * a + 1.0) / (2.0 * s3 * a);
    let a3 = (a * a + 1.0) / (s6 * a);
    let b1 = (b * b - 1.0) / (2.0 * b);
    let b2 = (b * b + 1.0) / (2.0 * s3 * b);
    let b3 = (b * b + 1.0) / (s6 * b);
    let c = (a + b) * (a * b - 1.0) / (3.0 * s2 * a * b);
    let d1 = (-a + 2.0 * b - 2.0 / b + 1.0 / a) / 6.0;
    let d2 = (-2.0 * a + b - 1.0 / b + 2.0 / a) / 6.0;

    #[rustfmt::skip]
    let rows: [[f64; 8]; 8] = [
        [  a1,  0.0,  a2,  0.0,  a3,  0.0,  0.0,  0.0],
        [ 0.0,  -a1, 0.0,   a2, 0.0,   a3,  0.0,  0.0],
        [ -a2,  0.0,  d1,  0.0,  -c,  0.0,  -b3,  0.0],
        [ 0.0,  -a2, 0.0,  -d1, 0.0,    c,  0.0,  -b3],
        [ -a3,  0.0,  -c,  0.0,  d2,  0.0,   b2,  0.0],
        [ 0.0,  -a3, 0.0,    c, 0.0,  -d2,  0.0,   b2],
        [ 0.0,  0.0,  b3,  0.0, -b2,  0.0,  -b1,  0.0],
        [ 0.0,  0.0, 0.0,   b3, 0.0,  -b2,  0.0,   b1],
    ];
    let mut s = DMatrix::zeros(8, 8);
    for (r, row) in rows.iter().enumerate() {
        for (col, &v) in row.iter().enumerate() {
            s[(r, col)] = v;
        }
    }
    Ok(s)
}

/// Two-mode PPT channel: the 8x8 generator split into quadrant 4x4 blocks
/// (first two displayed modes are input/output, last two are environment),
/// with a two-mode vacuum environment.
///
/// This quadrant split is the one whose combined-channel algebra the rest of
/// the crate builds on. Note that it is NOT itself an entanglement-binding
/// split of the generator: see [`entanglement_binding_channel`] for the
/// mode partition of the same matrix that passes the Choi partial-transpose
/// test. The self-test suite checks both facts.
pub fn ppt_channel(a: f64, b: f64) -> Result<DilatedChannel> {
    let s = ppt_symplectic_matrix(a, b)?;
    let x = s.view((0, 0), (4, 4)).into_owned();
    let z = s.view((0, 4), (4, 4)).into_owned();
    let xc = s.view((4, 0), (4, 4)).into_owned();
    let zc = s.view((4, 4), (4, 4)).into_owned();
    DilatedChannel::new(x, z, xc, zc, CovMatrix::identity(2), format!("ppt(a={a}, b={b})"))
}

/// The outer-mode split of the same 8x8 generator: displayed modes 1 and 4
/// are input/output, modes 2 and 3 are the environment. This reading is
/// entanglement-binding: its Choi-type output stays positive under partial
/// transposition (the defining PPT property).
pub fn entanglement_binding_channel(a: f64, b: f64) -> Result<DilatedChannel> {
    let s = ppt_symplectic_matrix(a, b)?;
    let io: [usize; 4] = [0, 1, 6, 7];
    let env: [usize; 4] = [2, 3, 4, 5];
    let pick = |rows: &[usize; 4], cols: &[usize; 4]| -> DMatrix<f64> {
        let mut m = DMatrix::zeros(4, 4);
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                m[(ri, ci)] = s[(r, c)];
            }
        }
        m
    };
    DilatedChannel::new(
        pick(&io, &io),
        pick(&io, &env),
        pick(&env, &io),
        pick(&env, &env),
        CovMatrix::identity(2),
        format!("binding(a={a}, b={b})"),
    )
}

/// Tensor product of the two-mode PPT channel with a single-mode channel:
/// 3 input modes (two PPT legs first, then the single-mode leg), 3 output
/// modes, 4 environment modes (PPT vacuum pair, then the thermal
/// purification pair).
pub fn tensor_with_ppt(single: &DilatedChannel, ppt: &DilatedChannel) -> Result<DilatedChannel> {
    if single.n_in() != 1 || single.n_out() != 1 || single.n_env() != 2 {
        return Err(Error::DimensionMismatch { expected: 1, got: single.n_in() });
    }
    if ppt.n_in() != 2 || ppt.n_out() != 2 || ppt.n_env() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: ppt.n_in() });
    }
    let x = block_diag(&ppt.x, &single.x);
    let z = block_diag(&ppt.z, &single.z);
    let xc = block_diag(&ppt.xc, &single.xc);
    let zc = block_diag(&ppt.zc, &single.zc);
    let env = direct_sum(ppt.env_cov(), single.env_cov());
    DilatedChannel::new(
        x,
        z,
        xc,
        zc,
        env,
        format!("{} (x) {}", ppt.label(), single.label()),
    )
}

fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut m = DMatrix::zeros(ar + br, ac + bc);
    m.view_mut((0, 0), (ar, ac)).copy_from(a);
    m.view_mut((ar, ac), (br, bc)).copy_from(b);
    m
}

/// Weak-complementary output of the thermal attenuator: traces out the
/// purifying mode, leaving (1-t) gamma + (2N+1) t I.
pub fn weak_complementary_attenuator(t: f64, nbar: f64, gamma: &CovMatrix) -> Result<CovMatrix> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::OutOfRange { what: "attenuator transmissivity", value: t });
    }
    if !(nbar >= 0.0) {
        return Err(Error::OutOfRange { what: "attenuator nbar", value: nbar });
    }
    if gamma.n_modes() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: gamma.n_modes() });
    }
    let m = gamma.data() * (1.0 - t) + DMatrix::identity(2, 2) * ((2.0 * nbar + 1.0) * t);
    CovMatrix::new(m)
}

/// Channel-plane region labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionLabel {
    NonPhysical,
    EntanglementBreaking,
    Interior,
}

impl core::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            RegionLabel::NonPhysical => "NonPhysical",
            RegionLabel::EntanglementBreaking => "EntanglementBreaking",
            RegionLabel::Interior => "Interior",
        };
        f.write_str(s)
    }
}

/// Classifies a (tau, y) point: physical channels satisfy y >= |tau - 1|,
/// entanglement breaking ones y >= |tau| + 1. Boundary ties belong to the
/// labeled region (>= on both tests).
pub fn classify_region(tau: f64, y: f64) -> RegionLabel {
    if y < (tau - 1.0).abs() {
        RegionLabel::NonPhysical
    } else if y >= tau.abs() + 1.0 {
        RegionLabel::EntanglementBreaking
    } else {
        RegionLabel::Interior
    }
}

/// Which phase-insensitive channel a plane point denotes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    Attenuator { t: f64, nbar: f64 },
    Amplifier { g: f64, nbar: f64 },
}

/// A single-mode phase-insensitive channel, identified either by its
/// (tau, y) plane coordinates (tau = det X, y = sqrt(det Y)) or by its
/// native parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseInsensitiveSpec {
    tau: f64,
    y: f64,
    kind: ChannelKind,
}

impl PhaseInsensitiveSpec {
    pub fn attenuator(t: f64, nbar: f64) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::OutOfRange { what: "attenuator transmissivity", value: t });
        }
        if !(nbar >= 0.0) {
            return Err(Error::OutOfRange { what: "attenuator nbar", value: nbar });
        }
        Ok(PhaseInsensitiveSpec {
            tau: t,
            y: (1.0 - t) * (2.0 * nbar + 1.0),
            kind: ChannelKind::Attenuator { t, nbar },
        })
    }

    pub fn amplifier(g: f64, nbar: f64) -> Result<Self> {
        if !(g > 1.0) {
            return Err(Error::OutOfRange { what: "amplifier gain", value: g });
        }
        if !(nbar >= 0.0) {
            return Err(Error::OutOfRange { what: "amplifier nbar", value: nbar });
        }
        Ok(PhaseInsensitiveSpec {
            tau: g,
            y: (g - 1.0) * (2.0 * nbar + 1.0),
            kind: ChannelKind::Amplifier { g, nbar },
        })
    }

    /// Converts plane coordinates to channel parameters: t = tau for
    /// attenuators (tau < 1), G = tau for amplifiers (tau > 1), and
    /// N = (y / |tau - 1| - 1) / 2 for both. Points below the physicality
    /// boundary (N < 0) and the tau = 1 line (no dilation) are rejected.
    pub fn from_plane(tau: f64, y: f64) -> Result<Self> {
        if tau <= 0.0 {
            return Err(Error::OutOfRange { what: "plane tau", value: tau });
        }
        if tau == 1.0 {
            return Err(Error::UnsupportedCombination(String::from(
                "tau = 1 denotes an additive-noise channel with no dilation here",
            )));
        }
        let denom = (tau - 1.0).abs();
        let nbar = (y / denom - 1.0) / 2.0;
        if nbar < -PLANE_BOUNDARY_TOL / denom {
            return Err(Error::Unphysical { min_eig: nbar });
        }
        let nbar = f64::max(nbar, 0.0);
        if tau < 1.0 {
            PhaseInsensitiveSpec::attenuator(tau, nbar)
        } else {
            PhaseInsensitiveSpec::amplifier(tau, nbar)
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn is_attenuator(&self) -> bool {
        matches!(self.kind, ChannelKind::Attenuator { .. })
    }

    /// Thermal occupation of the environment.
    pub fn nbar(&self) -> f64 {
        match self.kind {
            ChannelKind::Attenuator { nbar, .. } | ChannelKind::Amplifier { nbar, .. } => nbar,
        }
    }

    /// Builds the dilation for this channel.
    pub fn channel(&self) -> DilatedChannel {
        match self.kind {
            ChannelKind::Attenuator { t, nbar } => {
                attenuator(t, nbar).expect("parameters validated at construction")
            }
            ChannelKind::Amplifier { g, nbar } => {
                amplifier(g, nbar).expect("parameters validated at construction")
            }
        }
    }
}

/// Symplecticity check over representative parameter grids for every
/// constructor, used by tests and the self-test suite.
pub fn constructor_grid() -> Vec<DilatedChannel> {
    let mut out = Vec::new();
    for &t in &[0.1, 0.3, 0.5, 0.8, 1.0] {
        for &n in &[0.0, 0.25, 0.7, 1.5, 3.0] {
            out.push(attenuator(t, n).expect("grid in range"));
        }
    }
    for &g in &[1.05, 1.3, 1.8, 2.5, 4.0] {
        for &n in &[0.0, 0.25, 0.7, 1.5, 3.0] {
            out.push(amplifier(g, n).expect("grid in range"));
        }
    }
    for &(a, b) in &[(1.0, 1.0), (1.5, 1.5), (2.0, 3.0), (1.5, 2.0)] {
        out.push(ppt_channel(a, b).expect("grid in range"));
    }
    out
}
