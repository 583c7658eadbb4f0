//! Built-in verification suites over the crate's own invariants, plus the
//! Choi-type partial-transpose diagnostic used to certify the
//! entanglement-binding mode split.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;
// float math resolves through the trait in no_std builds; tests link std
#[allow(unused_imports)]
use num_traits::Float;

use crate::channels::{self, DilatedChannel};
use crate::symplectic::{self, CovMatrix};
use crate::Result;

/// Choi-type partial-transpose diagnostic for a 2-in/2-out channel.
///
/// Feeds the signal arms of two squeezing-r TMSV pairs through the channel,
/// keeps the reference arms, partially transposes the channel-output pair of
/// the 4-mode result, and returns the minimum eigenvalue of gamma + iJ.
/// Nonnegative (within tolerance) means the output is PPT for this probe.
pub fn choi_partial_transpose_min_eig(ch: &DilatedChannel, r: f64) -> Result<f64> {
    if ch.n_in() != 2 || ch.n_out() != 2 {
        return Err(crate::Error::DimensionMismatch { expected: 2, got: ch.n_in() });
    }
    let pair = symplectic::tmsv_from_squeezing(r);
    // (s1, r1, s2, r2) -> (s1, s2, r1, r2)
    let stacked = symplectic::direct_sum(&pair, &pair);
    let gamma4 = permute_modes(&stacked, &[0, 2, 1, 3]);

    let mut m = DMatrix::<f64>::identity(8, 8);
    m.view_mut((0, 0), (4, 4)).copy_from(ch.x());
    let mut noise = DMatrix::<f64>::zeros(8, 8);
    noise.view_mut((0, 0), (4, 4)).copy_from(ch.noise_block());
    let choi = &m * gamma4.data() * m.transpose() + noise;
    let choi = CovMatrix::new((&choi + choi.transpose()) * 0.5)?;

    let pt = symplectic::partial_transpose(&choi, &[0, 1])?;
    Ok(symplectic::physicality_min_eig(&pt))
}

/// Reorders modes of a covariance matrix: new mode i is old mode perm[i].
fn permute_modes(cov: &CovMatrix, perm: &[usize]) -> CovMatrix {
    let n = cov.n_modes();
    assert_eq!(perm.len(), n, "permutation length must match mode count");
    let d = cov.data();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for (i, &pi) in perm.iter().enumerate() {
        for (j, &pj) in perm.iter().enumerate() {
            for a in 0..2 {
                for b in 0..2 {
                    out[(2 * i + a, 2 * j + b)] = d[(2 * pi + a, 2 * pj + b)];
                }
            }
        }
    }
    CovMatrix::new(out).expect("mode permutation preserves symmetry")
}

/// Optional deliberate corruption applied by the self-test suites, used to
/// demonstrate that they detect real faults.
#[derive(Debug, Clone, Copy, Default)]
pub struct FaultInjection {
    /// Perturb one entry of the PPT symplectic generator before the
    /// symplecticity suite checks it.
    pub corrupt_ppt: bool,
}

/// A named self-test suite: runs a batch of invariant checks and reports the
/// first violation as a message.
pub struct Suite {
    pub name: &'static str,
    pub run: fn(&FaultInjection) -> core::result::Result<(), String>,
}

/// All suites, in execution order.
pub fn suites() -> Vec<Suite> {
    alloc::vec![
        Suite { name: "symplecticity", run: suite_symplecticity },
        Suite { name: "cptp", run: suite_cptp },
        Suite { name: "tmsv-purity", run: suite_tmsv_purity },
        Suite { name: "entropy-balance", run: suite_entropy_balance },
        Suite { name: "input-family-physicality", run: suite_input_family },
        Suite { name: "choi-ppt", run: suite_choi_ppt },
        Suite { name: "dilation-oracle", run: suite_dilation_oracle },
        Suite { name: "bounds", run: suite_bounds },
        Suite { name: "activation-basics", run: suite_activation_basics },
        Suite { name: "fd-oracle", run: suite_fd_oracle },
    ]
}

fn suite_symplecticity(fault: &FaultInjection) -> core::result::Result<(), String> {
    for ch in channels::constructor_grid() {
        let dev = symplectic::symplectic_deviation(&ch.stacked());
        if dev > channels::STACKED_SYMPLECTIC_TOL {
            return Err(format!("{}: dilation deviates from symplectic by {dev:e}", ch.label()));
        }
    }
    for &(a, b) in &[(1.0, 1.0), (1.5, 1.5), (2.0, 3.0), (1.5, 2.0)] {
        let mut s = channels::ppt_symplectic_matrix(a, b).map_err(|e| format!("{e}"))?;
        if fault.corrupt_ppt {
            s[(0, 2)] += 1e-3;
        }
        let dev = symplectic::symplectic_deviation(&s);
        if dev > channels::STACKED_SYMPLECTIC_TOL {
            return Err(format!(
                "ppt generator (a={a}, b={b}) deviates from symplectic by {dev:e}"
            ));
        }
    }
    Ok(())
}

fn suite_cptp(_: &FaultInjection) -> core::result::Result<(), String> {
    for ch in channels::constructor_grid() {
        let min_eig = ch.cptp_min_eig();
        if min_eig < -channels::CPTP_TOL {
            return Err(format!("{}: CPTP matrix has eigenvalue {min_eig:e}", ch.label()));
        }
    }
    Ok(())
}

fn suite_tmsv_purity(_: &FaultInjection) -> core::result::Result<(), String> {
    for &nbar in &[0.0, 0.1, 0.5, 1.0, 2.5, 7.5] {
        let env = symplectic::tmsv(nbar).map_err(|e| format!("{e}"))?;
        let spectrum = symplectic::symplectic_eigenvalues(&env).map_err(|e| format!("{e}"))?;
        for &nu in spectrum.values() {
            if (nu - 1.0).abs() > 1e-8 {
                return Err(format!("tmsv({nbar}) impure: symplectic eigenvalue {nu}"));
            }
        }
        let top = env.data().view((0, 0), (2, 2)).into_owned();
        let expect = DMatrix::identity(2, 2) * (2.0 * nbar + 1.0);
        if (top - expect).abs().max() > 1e-12 {
            return Err(format!("tmsv({nbar}) marginal is not the thermal state"));
        }
    }
    Ok(())
}

fn suite_entropy_balance(_: &FaultInjection) -> core::result::Result<(), String> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(97);
    for ch in [
        channels::attenuator(0.5, 0.0),
        channels::attenuator(0.35, 1.4),
        channels::amplifier(1.8, 0.6),
        channels::ppt_channel(1.5, 1.5),
    ] {
        let ch = ch.map_err(|e| format!("{e}"))?;
        for _ in 0..10 {
            let pure = crate::sampling::random_pure_cov(ch.n_in(), &mut rng);
            let h_out = symplectic::gaussian_entropy(&ch.apply(&pure).map_err(|e| format!("{e}"))?)
                .map_err(|e| format!("{e}"))?;
            let h_com = symplectic::gaussian_entropy(
                &ch.apply_complementary(&pure).map_err(|e| format!("{e}"))?,
            )
            .map_err(|e| format!("{e}"))?;
            if (h_out - h_com).abs() > 1e-7 {
                return Err(format!(
                    "{}: pure input gives H(out)={h_out} but H(env)={h_com}",
                    ch.label()
                ));
            }
        }
    }
    Ok(())
}

fn suite_input_family(_: &FaultInjection) -> core::result::Result<(), String> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(98);
    for _ in 0..100 {
        let s1 = 1.0 + 9.0 * rng.gen::<f64>();
        let s2 = 1.0 + 9.0 * rng.gen::<f64>();
        let s3 = 1.0 + 9.0 * rng.gen::<f64>();
        let p = crate::activation::InputFamilyParams::new(s1, s2, s3)
            .map_err(|e| format!("{e}"))?;
        let gamma = crate::activation::input_family(p).map_err(|e| format!("{e}"))?;
        let min_eig = symplectic::physicality_min_eig(&gamma);
        if min_eig < -1e-9 {
            return Err(format!(
                "input family at ({s1}, {s2}, {s3}) unphysical: min eig {min_eig:e}"
            ));
        }
    }
    Ok(())
}

fn suite_choi_ppt(_: &FaultInjection) -> core::result::Result<(), String> {
    let frozen: [(f64, f64, f64); 3] =
        [(1.0, 1.0, 0.0), (1.5, 1.5, 0.313436), (2.0, 3.0, 0.431707)];
    for &(a, b, expect_r1) in &frozen {
        let ch = channels::entanglement_binding_channel(a, b).map_err(|e| format!("{e}"))?;
        for &r in &[0.5, 1.0, 2.0] {
            let v = choi_partial_transpose_min_eig(&ch, r).map_err(|e| format!("{e}"))?;
            if v < -1e-9 {
                return Err(format!(
                    "binding split (a={a}, b={b}) fails PPT at r={r}: min eig {v:e}"
                ));
            }
            if r == 1.0 && (v - expect_r1).abs() > 1e-4 {
                return Err(format!(
                    "binding split (a={a}, b={b}) drifted from frozen value: {v} vs {expect_r1}"
                ));
            }
        }
    }
    // the quadrant split used by the activation search must stay NPT,
    // otherwise the two readings have been swapped somewhere
    let quadrant = channels::ppt_channel(1.5, 1.5).map_err(|e| format!("{e}"))?;
    let v = choi_partial_transpose_min_eig(&quadrant, 1.0).map_err(|e| format!("{e}"))?;
    if v > -0.1 {
        return Err(format!("quadrant split unexpectedly near-PPT: min eig {v}"));
    }
    Ok(())
}

fn suite_dilation_oracle(_: &FaultInjection) -> core::result::Result<(), String> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let single = channels::attenuator(0.6, 0.4).map_err(|e| format!("{e}"))?;
    let ppt = channels::ppt_channel(1.5, 2.0).map_err(|e| format!("{e}"))?;
    let combined = channels::tensor_with_ppt(&single, &ppt).map_err(|e| format!("{e}"))?;
    for ch in [
        channels::attenuator(0.5, 0.0).map_err(|e| format!("{e}"))?,
        channels::amplifier(2.0, 1.0).map_err(|e| format!("{e}"))?,
        ppt,
        combined,
    ] {
        for _ in 0..50 {
            let gamma = crate::sampling::random_physical_cov(ch.n_in(), &mut rng);
            let (out_oracle, com_oracle) = channels::full_dilation_oracle(&ch, &gamma);
            let out = ch.apply(&gamma).map_err(|e| format!("{e}"))?;
            let com = ch.apply_complementary(&gamma).map_err(|e| format!("{e}"))?;
            let d_out = (out.data() - out_oracle.data()).abs().max();
            let d_com = (com.data() - com_oracle.data()).abs().max();
            if d_out > 1e-10 || d_com > 1e-10 {
                return Err(format!(
                    "{}: apply disagrees with full-dilation oracle by {:e}",
                    ch.label(),
                    d_out.max(d_com)
                ));
            }
        }
    }
    Ok(())
}

fn suite_bounds(_: &FaultInjection) -> core::result::Result<(), String> {
    let q = crate::bounds::q_data(0.9, 0.0).map_err(|e| format!("{e}"))?;
    if (q - 9.0f64.log2()).abs() > 1e-12 {
        return Err(format!("uniform-loss data bound at t=0.9: {q}"));
    }
    let q = crate::bounds::q_plob(0.5, 0.0).map_err(|e| format!("{e}"))?;
    if (q - 1.0).abs() > 1e-12 {
        return Err(format!("repeaterless bound at t=0.5: {q}"));
    }
    for &t in &[0.6, 0.75, 0.9] {
        let mut prev = f64::INFINITY;
        for i in 0..=20 {
            let n = 0.1 * i as f64;
            let q = crate::bounds::q_upper(t, n).map_err(|e| format!("{e}"))?;
            if q > prev + 1e-12 {
                return Err(format!("q_upper not monotone in noise at t={t}, N={n}"));
            }
            prev = q;
        }
    }
    let cases: [(f64, f64, f64); 4] = [
        (0.7, 0.0, 1.222392),
        (0.9, 0.5, 1.792481),
        (2.0, 0.0, 1.0),
        (1.5, 0.3, 0.571808),
    ];
    for &(tau, nbar, expect) in &cases {
        let spec = if tau < 1.0 {
            crate::channels::PhaseInsensitiveSpec::attenuator(tau, nbar)
        } else {
            crate::channels::PhaseInsensitiveSpec::amplifier(tau, nbar)
        }
        .map_err(|e| format!("{e}"))?;
        let got = crate::bounds::max_coherent_info(&spec, &Default::default())
            .map_err(|e| format!("{e}"))?;
        if (got.value - expect).abs() > 2e-3 {
            return Err(format!(
                "max coherent information at (tau={tau}, N={nbar}): {} vs {expect}",
                got.value
            ));
        }
    }
    Ok(())
}

fn suite_activation_basics(_: &FaultInjection) -> core::result::Result<(), String> {
    use crate::activation;
    use crate::bounds::BoundKind;
    let spec =
        crate::channels::PhaseInsensitiveSpec::attenuator(0.5, 0.0).map_err(|e| format!("{e}"))?;
    let cfg = activation::SearchConfig { max_iters: 60, ..Default::default() };
    let r1 = activation::optimize_activation(&spec, &cfg, BoundKind::QUpper)
        .map_err(|e| format!("{e}"))?;
    let r2 = activation::optimize_activation(&spec, &cfg, BoundKind::QUpper)
        .map_err(|e| format!("{e}"))?;
    if r1.ic_combined.to_bits() != r2.ic_combined.to_bits()
        || r1.best_params.s1.to_bits() != r2.best_params.s1.to_bits()
    {
        return Err(String::from("activation search is not bitwise deterministic"));
    }
    for si in [r1.best_params.s1, r1.best_params.s2, r1.best_params.s3] {
        if !(1.0 <= si && si <= cfg.s_max + 1e-9) {
            return Err(format!("squeezing parameter {si} escaped [1, s_max]"));
        }
    }
    let gamma = activation::input_family(r1.best_params).map_err(|e| format!("{e}"))?;
    let energy = gamma.data().trace() / 2.0 - 3.0;
    let bound = activation::input_family_energy_bound(cfg.s_max);
    if energy > bound {
        return Err(format!("optimal input energy {energy} exceeds the family bound {bound}"));
    }
    Ok(())
}

fn suite_fd_oracle(_: &FaultInjection) -> core::result::Result<(), String> {
    let id2 = crate::fd::KrausChannel::identity(2).map_err(|e| format!("{e}"))?;
    let best = crate::fd::max_coherent_info_fd(&id2, 4, 123).map_err(|e| format!("{e}"))?;
    if (best - 1.0).abs() > 1e-4 {
        return Err(format!("qubit identity channel: max coherent information {best}"));
    }
    let eb = crate::fd::eb_channel_cq(2, 42).map_err(|e| format!("{e}"))?;
    let best =
        crate::fd::max_coherent_info_fd(eb.channel(), 4, 123).map_err(|e| format!("{e}"))?;
    if best > 1e-6 {
        return Err(format!("measure-and-prepare channel has positive coherent info {best}"));
    }
    let report =
        crate::fd::verify_eb_additivity(2, &id2, 3, 42).map_err(|e| format!("{e}"))?;
    if !report.pass {
        return Err(format!(
            "additivity check failed: lhs {} exceeds rhs {} beyond {}",
            report.lhs, report.rhs, report.tol
        ));
    }
    Ok(())
}
