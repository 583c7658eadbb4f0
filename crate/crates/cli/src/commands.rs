//! Command implementations. Each grid cell is computed by a pure function of
//! its coordinates and the search configuration, so scans produce identical
//! output regardless of thread count and reruns are byte-identical.

use std::time::Instant;

use rayon::prelude::*;

use gcap_core::activation::{optimize_activation, SearchConfig};
use gcap_core::bounds::{self, max_coherent_info, BoundKind, GridOptions};
use gcap_core::channels::{classify_region, ChannelKind, PhaseInsensitiveSpec, RegionLabel};
use gcap_core::fd::{verify_eb_additivity, KrausChannel};
use gcap_core::selftest::{suites, FaultInjection};
use gcap_core::Error;

use crate::config::{Format, ScanSettings, Threads};
use crate::record::{render_csv, render_json, sanitize_flag, write_atomic, ScanRecord};
use crate::Failure;

/// Inclusive uniform grid; a single step collapses to the left endpoint.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    (0..steps).map(|i| min + (max - min) * i as f64 / (steps - 1) as f64).collect()
}

fn error_flag(e: &Error) -> String {
    sanitize_flag(&format!("error: {e}"))
}

/// Evaluates one channel-plane cell. Never panics and never returns an error:
/// anything that prevents optimization lands in the record's flags so one bad
/// cell cannot abort a scan.
pub fn compute_record(
    tau: f64,
    y: f64,
    bound: BoundKind,
    search: &SearchConfig,
    skip_eb: bool,
) -> ScanRecord {
    let region = classify_region(tau, y);
    let mut rec = ScanRecord::bare(tau, y, region.to_string());
    if region == RegionLabel::NonPhysical {
        rec.flags.push(String::from("skipped"));
        return rec;
    }
    let spec = match PhaseInsensitiveSpec::from_plane(tau, y) {
        Ok(s) => s,
        Err(Error::UnsupportedCombination(_)) => {
            rec.flags.push(String::from("skipped"));
            rec.flags.push(String::from("additive-noise"));
            return rec;
        }
        Err(e) => {
            rec.flags.push(error_flag(&e));
            return rec;
        }
    };
    match spec.kind() {
        ChannelKind::Attenuator { t, nbar } => {
            rec.t_or_g = Some(t);
            rec.nbar = Some(nbar);
        }
        ChannelKind::Amplifier { g, nbar } => {
            rec.t_or_g = Some(g);
            rec.nbar = Some(nbar);
        }
    }
    if region == RegionLabel::EntanglementBreaking && skip_eb {
        rec.flags.push(String::from("skipped"));
        return rec;
    }
    if bound == BoundKind::QUpper && !spec.is_attenuator() {
        rec.flags.push(String::from("skipped"));
        return rec;
    }
    let result = match optimize_activation(&spec, search, bound) {
        Ok(r) => r,
        Err(e) => {
            rec.flags.push(error_flag(&e));
            return rec;
        }
    };
    rec.ic_combined = Some(result.ic_combined);
    rec.delta = Some(result.delta);
    rec.s1 = Some(result.best_params.s1);
    rec.s2 = Some(result.best_params.s2);
    rec.s3 = Some(result.best_params.s3);
    rec.ppt_a = Some(result.ppt_ab.0);
    rec.ppt_b = Some(result.ppt_ab.1);
    rec.certified = result.certified;
    if !result.bound_converged {
        rec.flags.push(String::from("bound-unconverged"));
    }
    match bound {
        BoundKind::QUpper => {
            rec.q_upper = Some(result.bound_value);
            // companion column so qu scans still expose the other bound
            match max_coherent_info(&spec, &GridOptions::default()) {
                Ok(ci) => {
                    rec.ci_max = Some(ci.value);
                    if !ci.converged {
                        rec.flags.push(String::from("ci-max-unconverged"));
                    }
                }
                Err(e) => rec.flags.push(error_flag(&e)),
            }
        }
        BoundKind::MaxCoherentInfo => {
            rec.ci_max = Some(result.bound_value);
            if let ChannelKind::Attenuator { t, nbar } = spec.kind() {
                match bounds::q_upper(t, nbar) {
                    Ok(q) => rec.q_upper = Some(q),
                    Err(e) => rec.flags.push(error_flag(&e)),
                }
            }
        }
    }
    rec
}

fn compute_all(cells: &[(f64, f64)], bound: BoundKind, search: &SearchConfig) -> Vec<ScanRecord> {
    cells
        .par_iter()
        .map(|&(tau, y)| compute_record(tau, y, bound, search, true))
        .collect()
}

pub fn cmd_scan(s: &ScanSettings) -> Result<(), Failure> {
    let taus = linspace(s.tau_min, s.tau_max, s.tau_steps);
    let ys = linspace(s.y_min, s.y_max, s.y_steps);
    let mut cells = Vec::with_capacity(taus.len() * ys.len());
    for &tau in &taus {
        for &y in &ys {
            cells.push((tau, y));
        }
    }
    let records = match s.threads {
        Threads::Auto => compute_all(&cells, s.bound, &s.search),
        Threads::Fixed(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Io(format!("thread pool: {e}")))?;
            pool.install(|| compute_all(&cells, s.bound, &s.search))
        }
    };
    let text = match s.format {
        Format::Csv => render_csv(&records),
        Format::Json => render_json(&records)?,
    };
    write_atomic(&s.out, text.as_bytes())?;
    let certified = records.iter().filter(|r| r.certified).count();
    let skipped =
        records.iter().filter(|r| r.flags.iter().any(|f| f == "skipped")).count();
    println!(
        "wrote {} records to {} ({} certified, {} skipped)",
        records.len(),
        s.out.display(),
        certified,
        skipped
    );
    Ok(())
}

fn bound_name(bound: BoundKind) -> &'static str {
    match bound {
        BoundKind::QUpper => "qu",
        BoundKind::MaxCoherentInfo => "cimax",
    }
}

pub fn cmd_point(tau: f64, y: f64, bound: BoundKind, search: &SearchConfig) -> Result<(), Failure> {
    if classify_region(tau, y) == RegionLabel::NonPhysical {
        return Err(Failure::Usage(format!(
            "point (tau={tau}, y={y}) lies in the NonPhysical region (y < |tau - 1|)"
        )));
    }
    let spec = PhaseInsensitiveSpec::from_plane(tau, y)
        .map_err(|e| Failure::Usage(format!("point (tau={tau}, y={y}): {e}")))?;
    if bound == BoundKind::QUpper && !spec.is_attenuator() {
        return Err(Failure::Usage(String::from(
            "the capacity upper bound applies to attenuators only; use --bound cimax for amplifiers",
        )));
    }
    let rec = compute_record(tau, y, bound, search, false);
    let Some(ic) = rec.ic_combined else {
        return Err(Failure::Invariant(format!(
            "optimization failed at (tau={tau}, y={y}): {}",
            rec.flags.join("; ")
        )));
    };
    match spec.kind() {
        ChannelKind::Attenuator { t, nbar } => {
            println!("channel: attenuator t={t:.6} N={nbar:.6} (tau={tau:.6}, y={y:.6}, {})", rec.region)
        }
        ChannelKind::Amplifier { g, nbar } => {
            println!("channel: amplifier G={g:.6} N={nbar:.6} (tau={tau:.6}, y={y:.6}, {})", rec.region)
        }
    }
    let bound_value = match bound {
        BoundKind::QUpper => rec.q_upper,
        BoundKind::MaxCoherentInfo => rec.ci_max,
    }
    .unwrap_or(f64::NAN);
    println!(
        "bound[{}]={bound_value:.6} ic_combined={ic:.6} delta={:.6}",
        bound_name(bound),
        rec.delta.unwrap_or(f64::NAN)
    );
    println!(
        "input: s1={:.6} s2={:.6} s3={:.6} ppt_a={:.6} ppt_b={:.6}",
        rec.s1.unwrap_or(f64::NAN),
        rec.s2.unwrap_or(f64::NAN),
        rec.s3.unwrap_or(f64::NAN),
        rec.ppt_a.unwrap_or(f64::NAN),
        rec.ppt_b.unwrap_or(f64::NAN)
    );
    println!("certified: {}", rec.certified);
    let json = serde_json::to_string(&rec)
        .map_err(|e| Failure::Io(format!("JSON encoding: {e}")))?;
    println!("{json}");
    Ok(())
}

pub fn cmd_verify_eb(dim: usize, trials: usize, seed: u64) -> Result<(), Failure> {
    if !(dim == 2 || dim == 3) {
        return Err(Failure::Usage(format!(
            "--dim must be 2 or 3 so the product dimension stays within the budget of {}",
            gcap_core::fd::FD_DIM_BUDGET
        )));
    }
    if trials == 0 {
        return Err(Failure::Usage(String::from("--trials must be at least 1")));
    }
    let make = |r: Result<KrausChannel, Error>| r.expect("fixed partner channels are valid");
    let cases: Vec<(&str, KrausChannel)> = vec![
        ("identity qubit", make(KrausChannel::identity(2))),
        ("dephasing(0.3)", make(KrausChannel::dephasing(0.3))),
        ("depolarizing(0.5)", make(KrausChannel::depolarizing(0.5))),
    ];
    let mut failures = 0usize;
    for eb_seed in [seed, seed + 1, seed + 2] {
        for (name, psi) in &cases {
            let report = verify_eb_additivity(dim, psi, trials, eb_seed)
                .map_err(|e| Failure::Invariant(format!("eb(dim={dim}, seed={eb_seed}): {e}")))?;
            let verdict = if report.pass { "pass" } else { "FAIL" };
            println!(
                "eb(dim={dim}, seed={eb_seed}) x {name}: lhs={:.6} rhs={:.6} {verdict}",
                report.lhs, report.rhs
            );
            if !report.pass {
                failures += 1;
            }
        }
    }
    if failures > 0 {
        return Err(Failure::Invariant(format!(
            "{failures} of 9 additivity checks exceeded tolerance"
        )));
    }
    println!("all 9 additivity checks passed (dim={dim}, trials={trials}, base seed {seed})");
    Ok(())
}

pub fn cmd_selftest(inject_ppt_fault: bool) -> Result<(), Failure> {
    let fi = FaultInjection { corrupt_ppt: inject_ppt_fault };
    let mut failed: Vec<&'static str> = Vec::new();
    for suite in suites() {
        let start = Instant::now();
        match (suite.run)(&fi) {
            Ok(()) => {
                println!("suite {:<26} ok     {:6.2} s", suite.name, start.elapsed().as_secs_f64())
            }
            Err(msg) => {
                println!("suite {:<26} FAILED {msg}", suite.name);
                failed.push(suite.name);
            }
        }
    }
    if !failed.is_empty() {
        return Err(Failure::Invariant(format!(
            "{} suite(s) failed: {}",
            failed.len(),
            failed.join(", ")
        )));
    }
    Ok(())
}
