use std::fs::File;
use std::io::Write;
use std::path::Path;

use opbohr::analysis::TheoremReport;

use crate::config::{ensure_parent, Format};
use crate::error::{CliError, CliResult};
use crate::suite::SuiteReport;

/// Pretty JSON with object keys in sorted order.
pub fn to_sorted_json<T: serde::Serialize>(value: &T) -> CliResult<String> {
    // serde_json::Value keeps maps in a BTreeMap, which sorts the keys.
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_report(text: &str) -> CliResult<SuiteReport> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_report(path: &Path) -> CliResult<SuiteReport> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_report(&text)
}

/// The report text with `meta.timestamp` removed, for comparing runs.
pub fn strip_timestamp(text: &str) -> CliResult<String> {
    let mut v: serde_json::Value = serde_json::from_str(text)?;
    if let Some(meta) = v.get_mut("meta").and_then(|m| m.as_object_mut()) {
        meta.remove("timestamp");
    }
    Ok(serde_json::to_string(&v)?)
}

const REPORT_COLUMNS: [&str; 10] =
    ["theorem_id", "family", "seed", "dim", "order", "r", "mu", "passed", "margin", "normalized_margin"];

fn report_row(r: &TheoremReport) -> [String; 10] {
    [
        r.theorem_id.to_string(),
        r.witness.family.clone(),
        r.witness.seed.map(|s| s.to_string()).unwrap_or_default(),
        r.witness.dim.to_string(),
        r.witness.order.to_string(),
        r.r.to_string(),
        r.mu.map(|m| m.to_string()).unwrap_or_default(),
        r.passed.to_string(),
        r.margin.to_string(),
        r.normalized_margin().to_string(),
    ]
}

pub fn write_report(report: &SuiteReport, path: &Path, format: Format) -> CliResult<()> {
    ensure_parent(path)?;
    match format {
        Format::Json => {
            let text = to_sorted_json(report)?;
            let mut f = File::create(path).map_err(|e| CliError::io(path, e))?;
            f.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(REPORT_COLUMNS)?;
            for r in &report.reports {
                w.write_record(report_row(r))?;
            }
            w.flush().map_err(|e| CliError::io(path, e))?;
        }
    }
    Ok(())
}
