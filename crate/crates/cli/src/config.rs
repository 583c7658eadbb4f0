//! Configuration resolution. Three layers, weakest first: built-in defaults,
//! the `key = value` config file, explicit CLI flags. The file is line
//! based; `#` starts a comment, blank lines are ignored, keys use the same
//! snake_case names as the struct fields.

use std::path::{Path, PathBuf};

use gcap_core::activation::SearchConfig;
use gcap_core::bounds::BoundKind;

use crate::args::{PointArgs, ScanArgs, SearchFlags};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Fixed(usize),
}

/// Fully resolved scan configuration.
#[derive(Debug, Clone)]
pub struct ScanSettings {
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_steps: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub y_steps: usize,
    pub bound: BoundKind,
    pub threads: Threads,
    pub out: PathBuf,
    pub format: Format,
    pub search: SearchConfig,
}

/// One optional value per config key; `None` means "not set at this layer".
#[derive(Debug, Clone, Default)]
pub struct Overlay {
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub tau_steps: Option<usize>,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
    pub y_steps: Option<usize>,
    pub bound: Option<BoundKind>,
    pub threads: Option<Threads>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub s_max: Option<f64>,
    pub starts: Option<usize>,
    pub max_iters: Option<usize>,
    pub f_tol: Option<f64>,
    pub ppt_a: Option<f64>,
    pub ppt_b: Option<f64>,
    pub optimize_ppt: Option<bool>,
    pub ppt_axis: Option<Vec<f64>>,
    pub certify_margin: Option<f64>,
}

fn parse<T: core::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("config key `{key}`: cannot parse `{value}`"))
}

fn parse_bound(value: &str) -> Result<BoundKind, String> {
    match value {
        "qu" => Ok(BoundKind::QUpper),
        "cimax" => Ok(BoundKind::MaxCoherentInfo),
        other => Err(format!("config key `bound`: expected qu or cimax, got `{other}`")),
    }
}

fn parse_format(value: &str) -> Result<Format, String> {
    match value {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(format!("config key `format`: expected csv or json, got `{other}`")),
    }
}

pub fn parse_threads(value: &str) -> Result<Threads, String> {
    if value == "auto" {
        return Ok(Threads::Auto);
    }
    match value.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Threads::Fixed(n)),
        _ => Err(format!("threads: expected `auto` or a positive integer, got `{value}`")),
    }
}

fn parse_axis(key: &str, value: &str) -> Result<Vec<f64>, String> {
    let axis: Result<Vec<f64>, _> =
        value.split(',').map(|v| v.trim().parse::<f64>()).collect();
    match axis {
        Ok(a) if !a.is_empty() && a.iter().all(|x| x.is_finite() && *x > 0.0) => Ok(a),
        _ => Err(format!("config key `{key}`: expected comma-separated positive reals")),
    }
}

impl Overlay {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "tau_min" => self.tau_min = Some(parse(key, value)?),
            "tau_max" => self.tau_max = Some(parse(key, value)?),
            "tau_steps" => self.tau_steps = Some(parse(key, value)?),
            "y_min" => self.y_min = Some(parse(key, value)?),
            "y_max" => self.y_max = Some(parse(key, value)?),
            "y_steps" => self.y_steps = Some(parse(key, value)?),
            "bound" => self.bound = Some(parse_bound(value)?),
            "threads" => self.threads = Some(parse_threads(value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(parse_format(value)?),
            "s_max" => self.s_max = Some(parse(key, value)?),
            "starts" => self.starts = Some(parse(key, value)?),
            "max_iters" => self.max_iters = Some(parse(key, value)?),
            "f_tol" => self.f_tol = Some(parse(key, value)?),
            "ppt_a" => self.ppt_a = Some(parse(key, value)?),
            "ppt_b" => self.ppt_b = Some(parse(key, value)?),
            "optimize_ppt" => self.optimize_ppt = Some(parse(key, value)?),
            "ppt_grid" => self.ppt_axis = Some(parse_axis(key, value)?),
            "certify_margin" => self.certify_margin = Some(parse(key, value)?),
            other => return Err(format!("unknown config key `{other}`")),
        }
        Ok(())
    }

    /// Fills every field that `stronger` sets, keeping the rest.
    pub fn override_with(&mut self, stronger: Overlay) {
        macro_rules! take {
            ($($f:ident),*) => { $( if stronger.$f.is_some() { self.$f = stronger.$f; } )* };
        }
        take!(
            tau_min, tau_max, tau_steps, y_min, y_max, y_steps, bound, threads, out, format,
            s_max, starts, max_iters, f_tol, ppt_a, ppt_b, optimize_ppt, ppt_axis,
            certify_margin
        );
    }
}

/// Parses config file text into an overlay.
pub fn parse_config_text(text: &str) -> Result<Overlay, String> {
    let mut overlay = Overlay::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected `key = value`", lineno + 1));
        };
        overlay.set(key.trim(), value.trim()).map_err(|e| format!("line {}: {e}", lineno + 1))?;
    }
    Ok(overlay)
}

fn load_config(path: &Path) -> Result<Overlay, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("config file {}: {e}", path.display())))?;
    parse_config_text(&text)
        .map_err(|e| Failure::Usage(format!("config file {}: {e}", path.display())))
}

fn flags_overlay(search: &SearchFlags) -> Result<Overlay, Failure> {
    let mut o = Overlay::default();
    o.s_max = search.s_max;
    o.starts = search.starts;
    o.max_iters = search.max_iters;
    o.f_tol = search.f_tol;
    o.ppt_a = search.ppt_a;
    o.ppt_b = search.ppt_b;
    o.optimize_ppt = search.optimize_ppt;
    o.certify_margin = search.certify_margin;
    if let Some(axis) = &search.ppt_grid {
        if axis.is_empty() || axis.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Failure::Usage(String::from(
                "--ppt-grid: expected comma-separated positive reals",
            )));
        }
        o.ppt_axis = Some(axis.clone());
    }
    Ok(o)
}

/// Full product of the axis with itself, first coordinate outermost. This is
/// the shape [`SearchConfig::ppt_grid`] expects.
pub fn axis_to_pairs(axis: &[f64]) -> Vec<(f64, f64)> {
    let mut pairs = Vec::with_capacity(axis.len() * axis.len());
    for &a in axis {
        for &b in axis {
            pairs.push((a, b));
        }
    }
    pairs
}

fn search_from(overlay: &Overlay) -> SearchConfig {
    let mut cfg = SearchConfig::default();
    if let Some(v) = overlay.s_max {
        cfg.s_max = v;
    }
    if let Some(v) = overlay.starts {
        cfg.starts = v;
    }
    if let Some(v) = overlay.max_iters {
        cfg.max_iters = v;
    }
    if let Some(v) = overlay.f_tol {
        cfg.f_tol = v;
    }
    if let Some(v) = overlay.ppt_a {
        cfg.ppt_a = v;
    }
    if let Some(v) = overlay.ppt_b {
        cfg.ppt_b = v;
    }
    if let Some(v) = overlay.optimize_ppt {
        cfg.optimize_ppt = v;
    }
    if let Some(axis) = &overlay.ppt_axis {
        cfg.ppt_grid = axis_to_pairs(axis);
    }
    if let Some(v) = overlay.certify_margin {
        cfg.certify_margin = v;
    }
    cfg
}

fn require<T: Copy>(field: Option<T>, name: &str) -> Result<T, Failure> {
    field.ok_or_else(|| Failure::Usage(format!("missing required setting `{name}`")))
}

/// Resolves `scan` settings from defaults, config file, and flags.
pub fn scan_settings(a: &ScanArgs) -> Result<ScanSettings, Failure> {
    let mut overlay = match &a.config {
        Some(path) => load_config(path)?,
        None => Overlay::default(),
    };
    let mut flags = flags_overlay(&a.search)?;
    flags.tau_min = a.tau_min;
    flags.tau_max = a.tau_max;
    flags.tau_steps = a.tau_steps;
    flags.y_min = a.y_min;
    flags.y_max = a.y_max;
    flags.y_steps = a.y_steps;
    flags.bound = a.bound.map(|b| b.kind());
    flags.format = a.format.map(|f| match f {
        crate::args::FormatArg::Csv => Format::Csv,
        crate::args::FormatArg::Json => Format::Json,
    });
    flags.out = a.out.clone();
    if let Some(t) = &a.threads {
        flags.threads = Some(parse_threads(t).map_err(Failure::Usage)?);
    }
    overlay.override_with(flags);

    let settings = ScanSettings {
        tau_min: require(overlay.tau_min, "tau_min")?,
        tau_max: require(overlay.tau_max, "tau_max")?,
        tau_steps: require(overlay.tau_steps, "tau_steps")?,
        y_min: require(overlay.y_min, "y_min")?,
        y_max: require(overlay.y_max, "y_max")?,
        y_steps: require(overlay.y_steps, "y_steps")?,
        bound: overlay.bound.unwrap_or(BoundKind::QUpper),
        threads: overlay.threads.unwrap_or(Threads::Auto),
        out: overlay.out.clone().ok_or_else(|| Failure::Usage(String::from(
            "missing required setting `out`",
        )))?,
        format: overlay.format.unwrap_or(Format::Csv),
        search: search_from(&overlay),
    };
    if settings.tau_steps < 1 || settings.y_steps < 1 {
        return Err(Failure::Usage(String::from("grid steps must be at least 1")));
    }
    if !(settings.tau_min <= settings.tau_max) || !(settings.y_min <= settings.y_max) {
        return Err(Failure::Usage(String::from("grid ranges must be ordered (min <= max)")));
    }
    Ok(settings)
}

/// Resolves `point` settings; grid and output keys in the file are allowed
/// and ignored so one manifest can drive both commands.
pub fn point_settings(a: &PointArgs) -> Result<(BoundKind, SearchConfig), Failure> {
    let mut overlay = match &a.config {
        Some(path) => load_config(path)?,
        None => Overlay::default(),
    };
    let mut flags = flags_overlay(&a.search)?;
    flags.bound = a.bound.map(|b| b.kind());
    overlay.override_with(flags);
    Ok((overlay.bound.unwrap_or(BoundKind::QUpper), search_from(&overlay)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn scan_args(argv: &[&str]) -> ScanArgs {
        let mut full = vec!["gcap", "scan"];
        full.extend_from_slice(argv);
        match crate::args::Cli::try_parse_from(full).unwrap().command {
            crate::args::Command::Scan(s) => s,
            _ => unreachable!(),
        }
    }

    #[test]
    fn file_text_parses_with_comments_and_blanks() {
        let text = "# a manifest\n\ntau_min = 0.4 # trailing\ntau_max=0.6\ntau_steps = 3\n";
        let o = parse_config_text(text).unwrap();
        assert_eq!(o.tau_min, Some(0.4));
        assert_eq!(o.tau_max, Some(0.6));
        assert_eq!(o.tau_steps, Some(3));
    }

    #[test]
    fn file_text_rejects_unknown_keys_and_bad_lines() {
        assert!(parse_config_text("tau_mn = 0.4\n").is_err());
        assert!(parse_config_text("tau_min 0.4\n").is_err());
        assert!(parse_config_text("bound = quu\n").is_err());
        assert!(parse_config_text("threads = 0\n").is_err());
        assert!(parse_config_text("ppt_grid = 1.0,-2.0\n").is_err());
    }

    #[test]
    fn flag_beats_file_value() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.cfg");
        std::fs::write(
            &path,
            "tau_min = 0.1\ntau_max = 0.9\ntau_steps = 5\ny_min = 0.2\ny_max = 0.8\n\
             y_steps = 4\nout = from_file.csv\nbound = cimax\nstarts = 3\n",
        )
        .unwrap();
        let a = scan_args(&["--config", path.to_str().unwrap(), "--tau-steps", "2", "--bound", "qu"]);
        let s = scan_settings(&a).unwrap();
        assert_eq!(s.tau_steps, 2);
        assert_eq!(s.bound, BoundKind::QUpper);
        // untouched file values survive
        assert_eq!(s.y_steps, 4);
        assert_eq!(s.search.starts, 3);
        assert_eq!(s.out, PathBuf::from("from_file.csv"));
        // defaults fill the rest
        assert_eq!(s.format, Format::Csv);
        assert_eq!(s.threads, Threads::Auto);
    }

    #[test]
    fn missing_required_settings_are_usage_errors() {
        let a = scan_args(&["--tau-min", "0.1"]);
        match scan_settings(&a) {
            Err(Failure::Usage(m)) => assert!(m.contains("tau_max")),
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn ordered_ranges_and_positive_steps_are_enforced() {
        let base = [
            "--tau-min", "0.5", "--tau-max", "0.4", "--tau-steps", "2", "--y-min", "0.1",
            "--y-max", "0.2", "--y-steps", "2", "--out", "x.csv",
        ];
        assert_eq!(scan_settings(&scan_args(&base)).unwrap_err().code(), 2);
    }

    #[test]
    fn ppt_axis_expands_to_the_full_product() {
        let pairs = axis_to_pairs(&[1.0, 2.0]);
        assert_eq!(pairs, vec![(1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (2.0, 2.0)]);
        let a = scan_args(&[
            "--tau-min", "0.1", "--tau-max", "0.2", "--tau-steps", "1", "--y-min", "1.0",
            "--y-max", "1.0", "--y-steps", "1", "--out", "x.csv", "--ppt-grid", "1.0,3.0",
        ]);
        let s = scan_settings(&a).unwrap();
        assert_eq!(s.search.ppt_grid, vec![(1.0, 1.0), (1.0, 3.0), (3.0, 1.0), (3.0, 3.0)]);
    }

    #[test]
    fn point_settings_default_to_qu_and_search_defaults() {
        let argv = ["gcap", "point", "0.5", "0.5"];
        let a = match crate::args::Cli::try_parse_from(argv).unwrap().command {
            crate::args::Command::Point(p) => p,
            _ => unreachable!(),
        };
        let (bound, search) = point_settings(&a).unwrap();
        assert_eq!(bound, BoundKind::QUpper);
        assert_eq!(search, SearchConfig::default());
    }

    #[test]
    fn threads_parser_accepts_auto_and_positives() {
        assert_eq!(parse_threads("auto").unwrap(), Threads::Auto);
        assert_eq!(parse_threads("4").unwrap(), Threads::Fixed(4));
        assert!(parse_threads("zero").is_err());
        assert!(parse_threads("-1").is_err());
    }
}
