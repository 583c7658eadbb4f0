//! Subcommands and flags. Every scan/search flag is optional here; defaults
//! and the key = value config file are resolved in [`crate::config`], with
//! explicit flags winning on conflict.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gcap_core::bounds::BoundKind;

/// Activation scans and probes for single-mode phase-insensitive Gaussian
/// channels paired with a two-mode PPT partner.
#[derive(Debug, Parser)]
#[command(name = "gcap", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep an inclusive uniform (tau, y) grid and write one record per point
    Scan(ScanArgs),
    /// Optimize a single (tau, y) point and print the record
    Point(PointArgs),
    /// Check that an entanglement-breaking partner never raises a
    /// finite-dimensional channel's maximum coherent information
    VerifyEb(VerifyEbArgs),
    /// Run every structural invariant suite, with per-suite timing
    Selftest(SelftestArgs),
}

/// Which single-channel benchmark a record is certified against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundArg {
    /// Capacity upper bound (attenuators only)
    Qu,
    /// Supremum of coherent information over thermal inputs
    Cimax,
}

impl BoundArg {
    pub fn kind(self) -> BoundKind {
        match self {
            BoundArg::Qu => BoundKind::QUpper,
            BoundArg::Cimax => BoundKind::MaxCoherentInfo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

/// Optimizer knobs shared by `scan` and `point`.
#[derive(Debug, Args, Default)]
pub struct SearchFlags {
    /// Upper end of the squeezing-parameter box [1, s_max]
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Number of multi-start lattice points
    #[arg(long)]
    pub starts: Option<usize>,
    /// Simplex iteration cap per start
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Simplex spread termination tolerance
    #[arg(long)]
    pub f_tol: Option<f64>,
    /// Fixed PPT partner parameter a (used while optimize-ppt is false)
    #[arg(long)]
    pub ppt_a: Option<f64>,
    /// Fixed PPT partner parameter b
    #[arg(long)]
    pub ppt_b: Option<f64>,
    /// Repeat the search over the full ppt-grid product, keep the best
    #[arg(long)]
    pub optimize_ppt: Option<bool>,
    /// Comma-separated axis values; the PPT search grid is axis x axis
    #[arg(long, value_delimiter = ',')]
    pub ppt_grid: Option<Vec<f64>>,
    /// Margin delta must exceed before a record is certified
    #[arg(long)]
    pub certify_margin: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Line-based `key = value` config file; explicit flags win on conflict
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Lowest tau value (inclusive)
    #[arg(long)]
    pub tau_min: Option<f64>,
    /// Highest tau value (inclusive)
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Grid points along tau
    #[arg(long)]
    pub tau_steps: Option<usize>,
    /// Lowest y value (inclusive)
    #[arg(long)]
    pub y_min: Option<f64>,
    /// Highest y value (inclusive)
    #[arg(long)]
    pub y_max: Option<f64>,
    /// Grid points along y
    #[arg(long)]
    pub y_steps: Option<usize>,
    /// Benchmark bound: qu or cimax
    #[arg(long, value_enum)]
    pub bound: Option<BoundArg>,
    /// Worker threads: `auto` or a positive integer
    #[arg(long)]
    pub threads: Option<String>,
    /// Output file path
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[command(flatten)]
    pub search: SearchFlags,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// tau = det X: transmissivity (tau < 1) or gain (tau > 1)
    #[arg(value_name = "TAU")]
    pub tau: f64,
    /// y = sqrt(det Y): the noise coordinate
    #[arg(value_name = "Y")]
    pub y: f64,
    /// Line-based `key = value` config file; explicit flags win on conflict
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Benchmark bound: qu or cimax
    #[arg(long, value_enum)]
    pub bound: Option<BoundArg>,
    #[command(flatten)]
    pub search: SearchFlags,
}

#[derive(Debug, Args)]
pub struct VerifyEbArgs {
    /// Entanglement-breaking channel dimension (2 or 3)
    #[arg(long)]
    pub dim: usize,
    /// Optimizer restarts per side of each check
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    /// Base seed; the three partner channels use seed, seed+1, seed+2
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Corrupt one PPT generator entry to demonstrate failure detection
    #[arg(long)]
    pub inject_ppt_fault: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_takes_positional_coordinates() {
        let cli = Cli::try_parse_from(["gcap", "point", "0.53", "0.55", "--bound", "qu"]).unwrap();
        match cli.command {
            Command::Point(p) => {
                assert_eq!(p.tau, 0.53);
                assert_eq!(p.y, 0.55);
                assert_eq!(p.bound, Some(BoundArg::Qu));
            }
            _ => panic!("expected point"),
        }
    }

    #[test]
    fn ppt_grid_flag_splits_on_commas() {
        let cli = Cli::try_parse_from([
            "gcap", "scan", "--ppt-grid", "1.0,1.5,2.0", "--out", "x.csv",
        ])
        .unwrap();
        match cli.command {
            Command::Scan(s) => assert_eq!(s.search.ppt_grid, Some(vec![1.0, 1.5, 2.0])),
            _ => panic!("expected scan"),
        }
    }

    #[test]
    fn verify_eb_has_seeded_defaults() {
        let cli = Cli::try_parse_from(["gcap", "verify-eb", "--dim", "2"]).unwrap();
        match cli.command {
            Command::VerifyEb(v) => {
                assert_eq!((v.dim, v.trials, v.seed), (2, 5, 42));
            }
            _ => panic!("expected verify-eb"),
        }
    }

    #[test]
    fn bound_values_map_to_kinds() {
        assert_eq!(BoundArg::Qu.kind(), BoundKind::QUpper);
        assert_eq!(BoundArg::Cimax.kind(), BoundKind::MaxCoherentInfo);
    }
}
