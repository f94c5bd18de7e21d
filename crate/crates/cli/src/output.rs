//! Report files: `reports.jsonl` (one verification report per line),
//! `ratio_curves.csv`, `sharpness.jsonl` and `metadata.json`. Everything
//! except the metadata is a pure function of the configuration and seed.

use std::fs;
use std::path::{Path, PathBuf};

use hgineq_core::catalog::VerificationReport;
use hgineq_core::sharpness::RatioCurve;
use serde::Serialize;

use crate::suite::SuiteOutcome;
use crate::CliError;

/// Version of the report line schema.
pub const SCHEMA_VERSION: u32 = 1;
pub const REPORTS_FILE: &str = "reports.jsonl";
pub const CURVES_FILE: &str = "ratio_curves.csv";
pub const SHARPNESS_FILE: &str = "sharpness.jsonl";
pub const METADATA_FILE: &str = "metadata.json";

#[derive(Serialize)]
struct ReportLine<'a> {
    schema_version: u32,
    #[serde(flatten)]
    report: &'a VerificationReport,
}

/// Run information that legitimately differs between runs.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool_version: &'static str,
    pub schema_version: u32,
    pub started_unix_s: u64,
    pub elapsed_s: f64,
    pub jobs: usize,
    pub seed: u64,
    pub cells: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub errors: Vec<(String, String)>,
    pub sharpness_failures: Vec<String>,
}

/// One JSON object per line, newline-terminated.
pub fn report_lines(reports: &[VerificationReport]) -> Result<String, CliError> {
    let mut s = String::new();
    for report in reports {
        let line = serde_json::to_string(&ReportLine { schema_version: SCHEMA_VERSION, report })
            .map_err(|e| CliError::Runtime(format!("cannot serialize a report: {e}")))?;
        s.push_str(&line);
        s.push('\n');
    }
    Ok(s)
}

pub fn curves_csv(curves: &[RatioCurve]) -> String {
    let mut s = String::from(RatioCurve::CSV_HEADER);
    s.push('\n');
    for c in curves {
        s.push_str(&c.csv_rows());
    }
    s
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// Writes all output files into `dir` (created if needed).
pub fn write_outputs(dir: &Path, outcome: &SuiteOutcome, metadata: &Metadata) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
    write(dir, REPORTS_FILE, &report_lines(&outcome.reports)?)?;
    write(dir, CURVES_FILE, &curves_csv(&outcome.curves))?;
    let mut sharp = String::new();
    for rec in outcome.sharpness_records() {
        let line = serde_json::to_string(&rec).map_err(|e| CliError::Runtime(format!("cannot serialize: {e}")))?;
        sharp.push_str(&line);
        sharp.push('\n');
    }
    write(dir, SHARPNESS_FILE, &sharp)?;
    let meta = serde_json::to_string_pretty(metadata).map_err(|e| CliError::Runtime(format!("cannot serialize: {e}")))?;
    write(dir, METADATA_FILE, &(meta + "\n"))?;
    Ok(())
}
