use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::{HarnessError, Report, ReportFormat};
use crate::ineq::{RecordParams, Verdict};

/// Column order of the CSV report.
pub const CSV_COLUMNS: [&str; 15] = [
    "function", "statement", "a", "b", "x", "theta", "lambda", "alpha", "m", "q", "p", "lhs", "rhs", "slack", "verdict",
];

fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn csv_err(e: impl fmt::Display) -> HarnessError {
    HarnessError::Serialize(e.to_string())
}

/// The report as CSV, one row per record in report order.
pub fn report_csv(report: &Report) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in &report.records {
        let mut row = vec![r.function.clone(), r.statement.name()];
        row.extend(r.params.columns().map(cell));
        row.extend([r.lhs, r.rhs, r.slack].map(|v| v.to_string()));
        row.push(r.verdict.to_string());
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(csv_err)?;
    String::from_utf8(bytes).map_err(csv_err)
}

pub fn report_json(report: &Report) -> Result<String, HarnessError> {
    serde_json::to_string_pretty(report).map_err(csv_err)
}

fn write(path: &Path, text: &str) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

pub fn emit_report(report: &Report, format: ReportFormat, path: &Path) -> Result<(), HarnessError> {
    let text = match format {
        ReportFormat::Json => report_json(report)?,
        ReportFormat::Csv => report_csv(report)?,
    };
    write(path, &text)
}

/// Sweep parameter used as the horizontal axis of plot data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    A,
    B,
    X,
    Theta,
    Lambda,
    Alpha,
    M,
    Q,
    P,
}

impl Axis {
    const NAMES: [(&'static str, Axis); 9] = [
        ("a", Axis::A),
        ("b", Axis::B),
        ("x", Axis::X),
        ("theta", Axis::Theta),
        ("lambda", Axis::Lambda),
        ("alpha", Axis::Alpha),
        ("m", Axis::M),
        ("q", Axis::Q),
        ("p", Axis::P),
    ];

    fn value(self, rp: &RecordParams) -> Option<f64> {
        rp.columns()[self as usize]
    }

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize].0
    }
}

impl FromStr for Axis {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        Self::NAMES
            .iter()
            .find(|(n, _)| *n == s.trim())
            .map(|(_, a)| *a)
            .ok_or_else(|| HarnessError::Config(format!("unknown plot axis `{s}` (expected one of a, b, x, theta, lambda, alpha, m, q, p)")))
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Min and median slack per (axis value, statement) over decided records.
pub fn plotdata_csv(report: &Report, axis: Axis) -> Result<String, HarnessError> {
    let mut groups: BTreeMap<(String, u64), (f64, Vec<f64>)> = BTreeMap::new();
    for r in &report.records {
        if !matches!(r.verdict, Verdict::Holds | Verdict::Violated) {
            continue;
        }
        let Some(v) = axis.value(&r.params) else { continue };
        // order-preserving key for positive and negative floats alike
        let bits = v.to_bits();
        let key = if v.is_sign_negative() { !bits } else { bits | (1 << 63) };
        groups.entry((r.statement.name(), key)).or_insert((v, Vec::new())).1.push(r.slack);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([axis.name(), "statement", "min_slack", "median_slack"]).map_err(csv_err)?;
    for ((statement, _), (v, mut slacks)) in groups {
        slacks.sort_by(f64::total_cmp);
        w.write_record([v.to_string(), statement, slacks[0].to_string(), median(&slacks).to_string()])
            .map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_err)?).map_err(csv_err)
}

pub fn emit_plotdata(report: &Report, axis: Axis, path: &Path) -> Result<(), HarnessError> {
    write(path, &plotdata_csv(report, axis)?)
}
