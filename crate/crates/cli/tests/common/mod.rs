//! Helpers shared by the integration and acceptance test binaries.

#![allow(dead_code)]

use std::process::{Command, Output};

/// Runs the CLI binary with the given arguments and captures its output.
pub fn gcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcap")).args(args).output().expect("binary launches")
}

pub fn stdout_of(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr_of(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// One parsed CSV scan row.
#[derive(Debug, Clone)]
pub struct Row {
    pub tau: f64,
    pub y: f64,
    pub region: String,
    pub t_or_g: Option<f64>,
    pub nbar: Option<f64>,
    pub q_upper: Option<f64>,
    pub ci_max: Option<f64>,
    pub ic_combined: Option<f64>,
    pub delta: Option<f64>,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub s3: Option<f64>,
    pub ppt_a: Option<f64>,
    pub ppt_b: Option<f64>,
    pub certified: bool,
    pub flags: String,
}

fn req(field: &str) -> f64 {
    field.parse().expect("numeric CSV field")
}

fn opt(field: &str) -> Option<f64> {
    if field.is_empty() {
        None
    } else {
        Some(req(field))
    }
}

/// Parses a rendered CSV scan, asserting the frozen header.
pub fn parse_csv(text: &str) -> Vec<Row> {
    let mut lines = text.lines();
    assert_eq!(lines.next().expect("header line"), gcap_cli::record::CSV_HEADER);
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f.len(), 16, "malformed row: {line}");
            Row {
                tau: req(f[0]),
                y: req(f[1]),
                region: f[2].to_string(),
                t_or_g: opt(f[3]),
                nbar: opt(f[4]),
                q_upper: opt(f[5]),
                ci_max: opt(f[6]),
                ic_combined: opt(f[7]),
                delta: opt(f[8]),
                s1: opt(f[9]),
                s2: opt(f[10]),
                s3: opt(f[11]),
                ppt_a: opt(f[12]),
                ppt_b: opt(f[13]),
                certified: match f[14] {
                    "true" => true,
                    "false" => false,
                    other => panic!("bad certified field: {other}"),
                },
                flags: f[15].to_string(),
            }
        })
        .collect()
}
