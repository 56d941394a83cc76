//! Parameter sweeps over functions and statements, and their reports.

mod config;
mod report;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{FunctionRef, OutputSpec, SweepConfig};
pub use report::{emit_plotdata, emit_report, plotdata_csv, report_csv, report_json, Axis};

use crate::constants::InequalityParams;
use crate::convexity::{evaluation_hull, ConvexityVerdict, Hypothesis, ScreenTarget};
use crate::expr::FunctionSpec;
use crate::ineq::{evaluate, hypothesis_interval, RecordParams, Statement, Verdict, VerificationRecord};
use crate::quad::QuadratureConfig;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.to_path_buf(), source }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    /// Format implied by a file extension, if any.
    pub fn from_path(path: &Path) -> Option<Self> {
        path.extension().and_then(|e| e.to_str()).and_then(|e| e.parse().ok())
    }
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(HarnessError::Config(format!("unknown report format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StatementSummary {
    pub holds: usize,
    pub violated: usize,
    pub skipped_convexity: usize,
    pub numeric_fail: usize,
    /// smallest slack among records that were decided (holds or violated)
    pub min_slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    /// seconds since the Unix epoch
    pub timestamp: u64,
    pub verdict_tol: f64,
    pub convexity_grid_n: usize,
    pub convexity_tol: f64,
    pub quadrature: QuadratureConfig,
    pub functions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub summary: BTreeMap<String, StatementSummary>,
    /// grid points dropped because a function could not be evaluated there
    pub skipped_params: usize,
    pub records: Vec<VerificationRecord>,
}

impl Report {
    pub fn new(metadata: Metadata, mut records: Vec<VerificationRecord>, skipped_params: usize) -> Self {
        records.sort_by(record_order);
        Self { summary: summarize(&records), metadata, skipped_params, records }
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.records.iter().filter(|r| r.verdict == verdict).count()
    }

    /// 2 if any record failed numerically, else 1 if any was violated, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.count(Verdict::NumericFail) > 0 {
            2
        } else if self.count(Verdict::Violated) > 0 {
            1
        } else {
            0
        }
    }
}

pub fn summarize(records: &[VerificationRecord]) -> BTreeMap<String, StatementSummary> {
    let mut out: BTreeMap<String, StatementSummary> = BTreeMap::new();
    for r in records {
        let s = out.entry(r.statement.name()).or_default();
        match r.verdict {
            Verdict::Holds => s.holds += 1,
            Verdict::Violated => s.violated += 1,
            Verdict::SkippedConvexity => s.skipped_convexity += 1,
            Verdict::NumericFail => s.numeric_fail += 1,
        }
        if matches!(r.verdict, Verdict::Holds | Verdict::Violated) {
            s.min_slack = Some(s.min_slack.map_or(r.slack, |m| m.min(r.slack)));
        }
    }
    out
}

fn cmp_opt(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(a), Some(b)) => a.total_cmp(&b),
        (a, b) => a.is_some().cmp(&b.is_some()),
    }
}

/// Row order of every report: function, statement, then parameters.
pub fn record_order(a: &VerificationRecord, b: &VerificationRecord) -> Ordering {
    a.function
        .cmp(&b.function)
        .then_with(|| a.statement.name().cmp(&b.statement.name()))
        .then_with(|| {
            a.params
                .columns()
                .iter()
                .zip(b.params.columns())
                .map(|(x, y)| cmp_opt(*x, y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

fn param_key(rp: &RecordParams) -> [u64; 9] {
    // NaN bits never arise here; absent fields map to a reserved pattern
    rp.columns().map(|v| v.map_or(u64::MAX, f64::to_bits))
}

/// `x = a·(b/a)^s` with exact endpoints.
fn quantile(a: f64, b: f64, s: f64) -> f64 {
    if s == 0.0 {
        a
    } else if s == 1.0 {
        b
    } else {
        a * (b / a).powf(s)
    }
}

fn grid_points(cfg: &SweepConfig) -> (Vec<InequalityParams>, usize) {
    let mut out = Vec::new();
    let mut invalid = 0;
    for &a in &cfg.a_values {
        for &ratio in &cfg.b_ratios {
            let b = a * ratio;
            for &s in &cfg.x_quantiles {
                let x = quantile(a, b, s);
                for &theta in &cfg.theta_values {
                    for &lambda in &cfg.lambda_values {
                        for &alpha in &cfg.alpha_values {
                            for &m in &cfg.m_values {
                                for &q in &cfg.q_values {
                                    let p = InequalityParams::new(a, b, x, theta, lambda, alpha, m, q);
                                    match p.validate() {
                                        Ok(()) => out.push(p),
                                        Err(e) => {
                                            log::warn!("skipping grid point: {e}");
                                            invalid += 1;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    (out, invalid)
}

/// Every point `f` must be evaluable on for `statement` at `rp`.
fn required_interval(statement: Statement, rp: &RecordParams) -> (f64, f64) {
    match statement.hypothesis(rp) {
        Some(h) => {
            let (lo, hi) = evaluation_hull(h.lo, h.hi, h.m);
            let (l2, h2) = hypothesis_interval(rp.a, rp.b, rp.m.unwrap_or(1.0));
            (lo.min(l2), hi.max(h2))
        }
        None => hypothesis_interval(rp.a, rp.b, rp.m.unwrap_or(1.0)),
    }
}

struct Task {
    function: usize,
    statement: Statement,
    params: RecordParams,
    hypothesis: Option<Hypothesis>,
}

type ScreenKey = (usize, (ScreenTarget, [u64; 5]));

/// Runs every (function, statement, grid point) combination. Numeric
/// failures become records; only an invalid configuration is an error.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    let functions: Vec<FunctionSpec> = cfg.functions.iter().map(FunctionRef::resolve).collect::<Result<_, _>>()?;
    let (points, mut skipped) = grid_points(cfg);

    let mut tasks = Vec::new();
    for (fi, f) in functions.iter().enumerate() {
        for &statement in &cfg.statements {
            let mut seen = std::collections::HashSet::new();
            for base in &points {
                let Some(params) = statement.canonical(base) else { continue };
                if !seen.insert(param_key(&params)) {
                    continue;
                }
                let (lo, hi) = required_interval(statement, &params);
                if !f.covers(lo, hi) {
                    log::info!(
                        "skipping {} / {statement} at a = {}, b = {}: needs [{lo}, {hi}], domain is [{}, {}]",
                        f.name, params.a, params.b, f.domain_lo, f.domain_hi
                    );
                    skipped += 1;
                    continue;
                }
                let hypothesis = statement.hypothesis(&params);
                tasks.push(Task { function: fi, statement, params, hypothesis });
            }
        }
    }

    // each hypothesis is screened once per function
    let mut wanted: Vec<(usize, Hypothesis)> = Vec::new();
    let mut index: HashMap<ScreenKey, usize> = HashMap::new();
    for t in &tasks {
        if let Some(h) = t.hypothesis {
            index.entry((t.function, h.key())).or_insert_with(|| {
                wanted.push((t.function, h));
                wanted.len() - 1
            });
        }
    }
    let screens: Vec<Result<ConvexityVerdict, String>> = wanted
        .par_iter()
        .map(|(fi, h)| h.screen(&functions[*fi], cfg.convexity_grid_n, cfg.convexity_tol).map_err(|e| e.to_string()))
        .collect();

    let records: Vec<VerificationRecord> = tasks
        .par_iter()
        .map(|t| {
            let screening = t
                .hypothesis
                .map(|h| screens[index[&(t.function, h.key())]].as_ref().map_err(String::as_str));
            evaluate(t.statement, &functions[t.function], &t.params, &cfg.quadrature, screening, cfg.verdict_tol)
        })
        .collect();

    let metadata = Metadata {
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        verdict_tol: cfg.verdict_tol,
        convexity_grid_n: cfg.convexity_grid_n,
        convexity_tol: cfg.convexity_tol,
        quadrature: cfg.quadrature,
        functions: functions.iter().map(|f| f.name.clone()).collect(),
    };
    let report = Report::new(metadata, records, skipped);
    log::info!(
        "{} records: {} hold, {} violated, {} skipped (convexity), {} numeric failures",
        report.records.len(),
        report.count(Verdict::Holds),
        report.count(Verdict::Violated),
        report.count(Verdict::SkippedConvexity),
        report.count(Verdict::NumericFail)
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(functions: &[&str], statements: Vec<Statement>) -> SweepConfig {
        SweepConfig {
            functions: functions.iter().map(|s| FunctionRef::Named(s.to_string())).collect(),
            a_values: vec![1.0],
            b_ratios: vec![2.0],
            x_quantiles: vec![0.0, 0.5, 1.0],
            theta_values: vec![0.5, 1.0],
            lambda_values: vec![0.0, 0.5],
            alpha_values: vec![1.0],
            m_values: vec![1.0],
            q_values: vec![1.0, 2.0],
            statements,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn constant_lemma2_records_are_exact() {
        let r = run_sweep(&small(&["const(1)"], vec![Statement::Lemma2])).unwrap();
        assert_eq!(r.records.len(), 3 * 2 * 2);
        for rec in &r.records {
            assert_eq!(rec.verdict, Verdict::Holds);
            assert!(rec.lhs.abs() < 1e-12 && rec.rhs == 0.0);
            assert!(rec.slack.abs() <= 1e-9);
            assert!(rec.params.alpha.is_none() && rec.params.q.is_none());
        }
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn dedupe_follows_statement_parameters() {
        let r = run_sweep(&small(&["u^2"], vec![Statement::Thm4, Statement::Midpoint(5), Statement::Thm(6)])).unwrap();
        let count = |s: &str| r.summary.get(s).map_or(0, |c| c.holds + c.violated + c.skipped_convexity + c.numeric_fail);
        assert_eq!(count("thm4"), 2);
        assert_eq!(count("midpoint5"), 2 * 2);
        // q = 1 is dropped for Hölder-type statements
        assert_eq!(count("thm6"), 3 * 2 * 2);
    }

    #[test]
    fn non_convex_derivative_power_is_skipped() {
        let cfg = SweepConfig { m_values: vec![0.5], ..small(&["ln(u)"], vec![Statement::Thm(5), Statement::Thm(7)]) };
        let r = run_sweep(&cfg).unwrap();
        assert!(!r.records.is_empty());
        assert!(r.records.iter().all(|rec| rec.verdict == Verdict::SkippedConvexity));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn out_of_domain_points_are_counted() {
        let cfg = SweepConfig { a_values: vec![1.0, 4.0], ..small(&["exp(u/4)"], vec![Statement::Lemma2]) };
        let r = run_sweep(&cfg).unwrap();
        assert_eq!(r.skipped_params, 3 * 2 * 2);
        assert_eq!(r.records.len(), 3 * 2 * 2);
    }

    #[test]
    fn cached_screening_matches_direct() {
        let r = run_sweep(&small(&["u^3"], vec![Statement::Thm(5), Statement::Thm(8)])).unwrap();
        let f = crate::expr::catalog::cube();
        for rec in &r.records {
            let h = rec.statement.hypothesis(&rec.params).unwrap();
            let direct = h.screen(&f, r.metadata.convexity_grid_n, r.metadata.convexity_tol).unwrap();
            assert_eq!(rec.convexity.as_ref().unwrap(), &direct);
        }
    }

    #[test]
    fn format_parsing() {
        assert_eq!("CSV".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert_eq!(ReportFormat::from_path(Path::new("r.json")), Some(ReportFormat::Json));
        assert_eq!(ReportFormat::from_path(Path::new("r.txt")), None);
    }
}
