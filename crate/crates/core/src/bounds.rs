//! Coherent information and two-way capacity upper bounds for the thermal
//! attenuator, plus a thermal-input supremum of single-letter coherent
//! information for any phase-insensitive channel.

// float math resolves through the trait in no_std builds; tests link std
#[allow(unused_imports)]
use num_traits::Float;

use crate::channels::{DilatedChannel, PhaseInsensitiveSpec};
use crate::symplectic::{self, CovMatrix, PHYSICALITY_TOL};
use crate::{Error, Result};

/// Grid-endpoint delta below which the thermal-input supremum is flagged as
/// converged.
pub const CONVERGENCE_DELTA_TOL: f64 = 1e-4;

/// Which single-channel quantity an activation search compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Two-way capacity upper bound; attenuators only.
    QUpper,
    /// Thermal-input supremum of single-letter coherent information;
    /// attenuators and amplifiers.
    MaxCoherentInfo,
}

/// Coherent information of a channel for one input state, with the two
/// entropies it is the difference of.
#[derive(Debug, Clone, Copy)]
pub struct CoherentInfoResult {
    /// H(output) - H(environment), in bits.
    pub value: f64,
    pub h_out: f64,
    pub h_comp: f64,
}

/// Single-letter coherent information I_c(gamma, ch) = H(out) - H(env).
///
/// Validates the input once, then evaluates both channel arms without
/// re-checking.
pub fn coherent_information(ch: &DilatedChannel, gamma: &CovMatrix) -> Result<CoherentInfoResult> {
    if gamma.n_modes() != ch.n_in() {
        return Err(Error::DimensionMismatch { expected: ch.n_in(), got: gamma.n_modes() });
    }
    let min_eig = symplectic::physicality_min_eig(gamma);
    if min_eig < -PHYSICALITY_TOL {
        return Err(Error::Unphysical { min_eig });
    }
    let h_out = symplectic::gaussian_entropy(&ch.apply_unchecked(gamma))?;
    let h_comp = symplectic::gaussian_entropy(&ch.apply_complementary_unchecked(gamma))?;
    Ok(CoherentInfoResult { value: h_out - h_comp, h_out, h_comp })
}

fn check_attenuator_domain(t: f64, nbar: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::OutOfRange { what: "bound transmissivity", value: t });
    }
    if !(nbar >= 0.0) {
        return Err(Error::OutOfRange { what: "bound nbar", value: nbar });
    }
    Ok(())
}

/// Data-processing upper bound on the two-way capacity of the thermal
/// attenuator: log2 of (t - N(1-t)) / ((1+N)(1-t)), floored at zero. Zero
/// whenever the numerator is nonpositive.
pub fn q_data(t: f64, nbar: f64) -> Result<f64> {
    check_attenuator_domain(t, nbar)?;
    let num = t - nbar * (1.0 - t);
    if num <= 0.0 {
        return Ok(0.0);
    }
    let den = (1.0 + nbar) * (1.0 - t);
    Ok(f64::max(0.0, (num / den).log2()))
}

/// Repeaterless upper bound on the two-way capacity of the thermal
/// attenuator: -log2[(1-t) t^N] - g(N), floored at zero.
pub fn q_plob(t: f64, nbar: f64) -> Result<f64> {
    check_attenuator_domain(t, nbar)?;
    let v = -(1.0 - t).log2() - nbar * t.log2() - symplectic::g_function(nbar)?;
    Ok(f64::max(0.0, v))
}

/// The tighter of the two attenuator bounds at each point.
pub fn q_upper(t: f64, nbar: f64) -> Result<f64> {
    Ok(f64::min(q_data(t, nbar)?, q_plob(t, nbar)?))
}

/// Grid for the thermal-input supremum: `points` values of mean photon
/// number, log1p-spaced from 0 to `n_max` inclusive.
#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    pub n_max: f64,
    pub points: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { n_max: 1e4, points: 200 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MaxCoherentInfo {
    /// Supremum of coherent information over thermal inputs, floored at zero.
    pub value: f64,
    /// Whether the last two grid points differ by less than
    /// [`CONVERGENCE_DELTA_TOL`].
    pub converged: bool,
}

/// Supremum of single-letter coherent information over thermal inputs.
///
/// For phase-insensitive channels the optimum over all Gaussian inputs is
/// attained on thermal states, so a one-dimensional grid in mean photon
/// number suffices. The grid tail grows without bound as the supremum is
/// approached at infinite energy, hence the convergence flag instead of an
/// error.
pub fn max_coherent_info(
    spec: &PhaseInsensitiveSpec,
    opts: &GridOptions,
) -> Result<MaxCoherentInfo> {
    if opts.points < 2 {
        return Err(Error::OutOfRange { what: "grid points", value: opts.points as f64 });
    }
    if !(opts.n_max > 0.0) {
        return Err(Error::OutOfRange { what: "grid n_max", value: opts.n_max });
    }
    let ch = spec.channel();
    let span = opts.n_max.ln_1p();
    let steps = (opts.points - 1) as f64;
    let mut best = f64::NEG_INFINITY;
    let mut last = 0.0;
    let mut second_last = 0.0;
    for i in 0..opts.points {
        let n = (span * i as f64 / steps).exp_m1();
        let gamma = CovMatrix::thermal(n)?;
        let ci = coherent_information(&ch, &gamma)?.value;
        second_last = last;
        last = ci;
        if ci > best {
            best = ci;
        }
    }
    Ok(MaxCoherentInfo {
        value: f64::max(0.0, best),
        converged: (last - second_last).abs() < CONVERGENCE_DELTA_TOL,
    })
}
