//! Command-line front end over the covariance-calculus core: grid scans of
//! the (tau, y) channel plane, single-point activation probes,
//! finite-dimensional additivity verification, and structural self-tests.
//!
//! Everything here is deterministic: reruns of the same configuration
//! produce byte-identical output files regardless of thread count.

pub mod args;
pub mod commands;
pub mod config;
pub mod record;

use clap::Parser;

/// A command failure carrying its process exit code.
///
/// Exit codes: 0 success, 1 invariant or lemma-check failure, 2 usage or
/// configuration error, 3 I/O error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Usage(String),
    Invariant(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Invariant(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Invariant(m) | Failure::Io(m) => m,
        }
    }
}

/// Parses arguments, dispatches the subcommand, and returns the exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version exit 0; malformed usage exits 2
            let _ = e.print();
            return u8::try_from(e.exit_code()).unwrap_or(2);
        }
    };
    let result = match cli.command {
        args::Command::Scan(a) => {
            config::scan_settings(&a).and_then(|s| commands::cmd_scan(&s))
        }
        args::Command::Point(a) => config::point_settings(&a)
            .and_then(|(bound, search)| commands::cmd_point(a.tau, a.y, bound, &search)),
        args::Command::VerifyEb(a) => commands::cmd_verify_eb(a.dim, a.trials, a.seed),
        args::Command::Selftest(a) => commands::cmd_selftest(a.inject_ppt_fault),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}
