//! CSV and JSON artifacts.

use std::fs;
use std::io::Write;
use std::path::Path;

use bsq_core::diagnostics::DiagnosticsRecord;
use serde::Serialize;

use crate::error::Result;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_diagnostics_csv(path: &Path, r_list: &[f64], records: &[DiagnosticsRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(DiagnosticsRecord::header(r_list))?;
    for r in records {
        w.write_record(r.values().into_iter().map(fmt_f64))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a diagnostics CSV back as `(header, rows)`.
pub fn read_csv_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| crate::error::HarnessError::Invalid(format!("{}: {e}", path.display())))?;
        rows.push(row);
    }
    Ok((header, rows))
}

/// Writes pretty JSON through a temporary sibling and renames it into place.
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        serde_json::to_writer_pretty(&mut f, value)?;
        f.write_all(b"\n")?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// `git describe` of the working tree, falling back to the crate version.
pub fn version_string() -> String {
    let pkg = env!("CARGO_PKG_VERSION");
    let git = std::process::Command::new("git")
        .args(["describe", "--always", "--dirty", "--tags"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty());
    match git {
        Some(g) => format!("{pkg}+{g}"),
        None => pkg.to_string(),
    }
}
