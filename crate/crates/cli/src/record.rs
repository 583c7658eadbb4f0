//! Scan output records and their CSV/JSON renderings. Both formats carry the
//! same field names; floats are written with 17 significant digits so a
//! rendered file round-trips to the exact bit pattern.

use std::path::Path;

use serde::Serialize;

use crate::Failure;

/// Column order of the CSV rendering. The header never changes without a
/// format version bump.
pub const CSV_HEADER: &str =
    "tau,y,region,t_or_G,N,q_upper,ci_max,ic_combined,delta,s1,s2,s3,ppt_a,ppt_b,certified,flags";

/// One grid cell of a scan. Optional fields stay empty (CSV) or null (JSON)
/// for cells where the quantity is not defined or was skipped.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub tau: f64,
    pub y: f64,
    pub region: String,
    #[serde(rename = "t_or_G")]
    pub t_or_g: Option<f64>,
    #[serde(rename = "N")]
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
    pub flags: Vec<String>,
}

impl ScanRecord {
    /// A record carrying only the cell coordinates and its region label.
    pub fn bare(tau: f64, y: f64, region: String) -> Self {
        ScanRecord {
            tau,
            y,
            region,
            t_or_g: None,
            nbar: None,
            q_upper: None,
            ci_max: None,
            ic_combined: None,
            delta: None,
            s1: None,
            s2: None,
            s3: None,
            ppt_a: None,
            ppt_b: None,
            certified: false,
            flags: Vec::new(),
        }
    }
}

/// 17 significant digits; enough to reproduce any f64 exactly.
fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// Flags become one CSV field joined with `;`. Characters that would break
/// the line structure are replaced so no quoting is ever needed.
pub fn sanitize_flag(flag: &str) -> String {
    flag.replace([',', ';', '\n', '\r'], " ")
}

fn csv_line(r: &ScanRecord) -> String {
    let flags =
        r.flags.iter().map(|f| sanitize_flag(f)).collect::<Vec<_>>().join(";");
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        fmt_float(r.tau),
        fmt_float(r.y),
        r.region,
        fmt_opt(r.t_or_g),
        fmt_opt(r.nbar),
        fmt_opt(r.q_upper),
        fmt_opt(r.ci_max),
        fmt_opt(r.ic_combined),
        fmt_opt(r.delta),
        fmt_opt(r.s1),
        fmt_opt(r.s2),
        fmt_opt(r.s3),
        fmt_opt(r.ppt_a),
        fmt_opt(r.ppt_b),
        r.certified,
        flags,
    )
}

pub fn render_csv(records: &[ScanRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 256);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&csv_line(r));
        out.push('\n');
    }
    out
}

pub fn render_json(records: &[ScanRecord]) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(records)
        .map_err(|e| Failure::Io(format!("JSON encoding: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Writes via a temp file in the destination directory plus an atomic rename,
/// so a crashed scan never leaves a truncated output behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    use std::io::Write;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    tmp.write_all(bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    tmp.persist(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}
