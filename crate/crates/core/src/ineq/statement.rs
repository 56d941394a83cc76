//! Checkable statements and the records they produce.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bounds::{bound, bound_with, derivative_sup, hypothesis_interval, DerivAbs};
use super::kf::{hh_chain, kf_direct, kf_lhs};
use super::remark;
use crate::constants::{c_k, conjugate, r_k, t_k, v34, InequalityParams};
use crate::convexity::{ConvexityVerdict, Hypothesis, ScreenTarget, DEFAULT_GRID_N, DEFAULT_TOL};
use crate::expr::FunctionSpec;
use crate::quad::QuadratureConfig;
use crate::{Error, Result};

/// Absolute floor under the relative verdict tolerance.
pub const IDENTITY_ABS_FLOOR: f64 = 1e-9;
/// Relative agreement required between two routes to the same quantity.
pub const REMARK_AGREEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Lemma2,
    Thm4,
    Theorem,
    Simpson,
    Midpoint,
    Trapezoid,
    Ostrowski,
    RemarkPowerMean,
    RemarkHolder,
}

/// One checkable statement. Numbered variants carry their parent bound,
/// 5 to 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statement {
    Lemma2,
    Thm4,
    Thm(u8),
    Simpson(u8),
    Midpoint(u8),
    Trapezoid(u8),
    Ostrowski(u8),
    Remark19MidpointPm,
    Remark19MidpointHolder,
}

impl Statement {
    pub fn all() -> Vec<Statement> {
        let mut v = vec![Statement::Lemma2, Statement::Thm4];
        for make in [Statement::Thm, Statement::Simpson, Statement::Midpoint, Statement::Trapezoid, Statement::Ostrowski] {
            v.extend((5..=8).map(make));
        }
        v.push(Statement::Remark19MidpointPm);
        v.push(Statement::Remark19MidpointHolder);
        v
    }

    pub fn family(self) -> Family {
        match self {
            Statement::Lemma2 => Family::Lemma2,
            Statement::Thm4 => Family::Thm4,
            Statement::Thm(_) => Family::Theorem,
            Statement::Simpson(_) => Family::Simpson,
            Statement::Midpoint(_) => Family::Midpoint,
            Statement::Trapezoid(_) => Family::Trapezoid,
            Statement::Ostrowski(_) => Family::Ostrowski,
            Statement::Remark19MidpointPm => Family::RemarkPowerMean,
            Statement::Remark19MidpointHolder => Family::RemarkHolder,
        }
    }

    /// The bound this statement instantiates.
    pub fn parent(self) -> Option<u8> {
        match self {
            Statement::Thm(n) | Statement::Simpson(n) | Statement::Midpoint(n) | Statement::Trapezoid(n) | Statement::Ostrowski(n) => Some(n),
            Statement::Remark19MidpointPm => Some(5),
            Statement::Remark19MidpointHolder => Some(6),
            Statement::Lemma2 | Statement::Thm4 => None,
        }
    }

    /// `λ` fixed by the statement, if any.
    pub fn fixed_lambda(self) -> Option<f64> {
        match self.family() {
            Family::Simpson => Some(1.0 / 3.0),
            Family::Midpoint | Family::Ostrowski | Family::RemarkPowerMean | Family::RemarkHolder => Some(0.0),
            Family::Trapezoid => Some(1.0),
            Family::Lemma2 | Family::Thm4 | Family::Theorem => None,
        }
    }

    pub fn name(self) -> String {
        match self {
            Statement::Lemma2 => "lemma2".into(),
            Statement::Thm4 => "thm4".into(),
            Statement::Thm(n) => format!("thm{n}"),
            Statement::Simpson(n) => format!("simpson{n}"),
            Statement::Midpoint(n) => format!("midpoint{n}"),
            Statement::Trapezoid(n) => format!("trapezoid{n}"),
            Statement::Ostrowski(n) => format!("ostrowski{n}"),
            Statement::Remark19MidpointPm => "remark_19_midpoint_pm".into(),
            Statement::Remark19MidpointHolder => "remark_19_midpoint_holder".into(),
        }
    }

    /// The record parameters this statement uses at a grid point, or `None`
    /// when the grid point is outside the statement's range.
    pub fn canonical(self, base: &InequalityParams) -> Option<RecordParams> {
        let InequalityParams { a, b, x, theta, lambda, alpha, m, q, .. } = *base;
        let mid = (a * b).sqrt();
        let needs_holder = self.parent().is_some_and(|n| n != 5);
        if needs_holder && q <= 1.0 {
            return None;
        }
        let full = RecordParams {
            a,
            b,
            x: Some(x),
            theta: Some(theta),
            lambda: Some(lambda),
            alpha: Some(alpha),
            m: Some(m),
            q: Some(q),
            p: conjugate(q),
        };
        Some(match self.family() {
            Family::Lemma2 => RecordParams { alpha: None, q: None, p: None, ..full },
            Family::Thm4 => RecordParams { a, b, theta: Some(theta), ..RecordParams::bare(a, b) },
            Family::Theorem => full,
            Family::Simpson | Family::Midpoint | Family::Trapezoid => {
                RecordParams { x: Some(mid), lambda: self.fixed_lambda(), ..full }
            }
            Family::Ostrowski => RecordParams { lambda: Some(0.0), ..full },
            Family::RemarkPowerMean | Family::RemarkHolder => {
                if theta != 1.0 || m != 1.0 {
                    return None;
                }
                RecordParams { x: Some(mid), lambda: Some(0.0), ..full }
            }
        })
    }

    /// The convexity hypothesis that must be certified before the
    /// statement's inequality is asserted.
    pub fn hypothesis(self, rp: &RecordParams) -> Option<Hypothesis> {
        match self.family() {
            Family::Lemma2 => None,
            Family::Thm4 => Some(Hypothesis {
                target: ScreenTarget::Function,
                alpha: 1.0,
                m: 1.0,
                q: 1.0,
                lo: rp.a,
                hi: rp.b,
            }),
            _ => {
                let m = rp.m.unwrap_or(1.0);
                let (lo, hi) = hypothesis_interval(rp.a, rp.b, m);
                Some(Hypothesis {
                    target: ScreenTarget::DerivativePower,
                    alpha: rp.alpha.unwrap_or(1.0),
                    m,
                    q: rp.q.unwrap_or(1.0),
                    lo,
                    hi,
                })
            }
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Statement::all()
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Params(format!("unknown statement `{s}`")))
    }
}

impl Serialize for Statement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Statement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    SkippedConvexity,
    NumericFail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::SkippedConvexity => "skipped_convexity",
            Verdict::NumericFail => "numeric_fail",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters of one record. Fields a statement does not use are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordParams {
    pub a: f64,
    pub b: f64,
    pub x: Option<f64>,
    pub theta: Option<f64>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub m: Option<f64>,
    pub q: Option<f64>,
    pub p: Option<f64>,
}

impl RecordParams {
    fn bare(a: f64, b: f64) -> Self {
        Self { a, b, x: None, theta: None, lambda: None, alpha: None, m: None, q: None, p: None }
    }

    /// Full parameter set, with neutral values for unused fields.
    pub fn to_inequality(&self) -> InequalityParams {
        let q = self.q.unwrap_or(1.0);
        InequalityParams {
            a: self.a,
            b: self.b,
            x: self.x.unwrap_or((self.a * self.b).sqrt()),
            theta: self.theta.unwrap_or(1.0),
            lambda: self.lambda.unwrap_or(0.0),
            alpha: self.alpha.unwrap_or(1.0),
            m: self.m.unwrap_or(1.0),
            q,
            p: self.p.or_else(|| conjugate(q)),
        }
    }

    /// Values in column order `a, b, x, theta, lambda, alpha, m, q, p`.
    pub fn columns(&self) -> [Option<f64>; 9] {
        [Some(self.a), Some(self.b), self.x, self.theta, self.lambda, self.alpha, self.m, self.q, self.p]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub function: String,
    pub statement: Statement,
    pub params: RecordParams,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`; for identities `−|lhs − rhs|`
    pub slack: f64,
    pub verdict: Verdict,
    pub convexity: Option<ConvexityVerdict>,
    pub verdict_tol: f64,
    /// statement-specific extras (middle of the chain, `M`, cross-route values)
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub detail: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Numbers computed for one statement before the verdict is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// whether the statement's inequality or identity holds within tolerance
    pub within_tol: bool,
    /// false when two routes to the same quantity disagree
    pub consistent: bool,
    pub detail: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

fn allowance(tol: f64, lhs: f64, rhs: f64) -> f64 {
    (tol * lhs.abs().max(rhs.abs())).max(IDENTITY_ABS_FLOOR)
}

fn agrees(u: f64, v: f64) -> bool {
    (u - v).abs() <= REMARK_AGREEMENT_TOL * u.abs().max(v.abs()).max(1.0)
}

impl Evaluation {
    fn inequality(lhs: f64, rhs: f64, tol: f64) -> Self {
        Self {
            lhs,
            rhs,
            slack: rhs - lhs,
            within_tol: lhs <= rhs + allowance(tol, lhs, rhs),
            consistent: true,
            detail: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.detail.insert(key.to_string(), value);
        self
    }
}

/// `2^(θ−1)/(m ln(b/a))^θ`, relating `K_f` at `x = √(ab)` to the
/// corollaries' left-hand sides.
pub fn corollary_scale(a: f64, b: f64, theta: f64, m: f64) -> f64 {
    2f64.powf(theta - 1.0) / (m * (b / a).ln()).powf(theta)
}

/// Simpson, midpoint and trapezoid forms at `x = √(ab)`.
fn midpoint_family(
    statement: Statement,
    f: &FunctionSpec,
    params: &InequalityParams,
    cfg: &QuadratureConfig,
    tol: f64,
) -> Result<Evaluation> {
    let n = statement.parent().expect("numbered statement");
    let InequalityParams { a, b, x, theta, m, .. } = *params;
    let k = kf_direct(f, params, cfg)?;
    let s = corollary_scale(a, b, theta, m);
    let (fa, fx, fb) = (f.eval(a.powf(m))?, f.eval(x.powf(m))?, f.eval(b.powf(m))?);
    let stated = match statement.family() {
        Family::Simpson => (fa + 4.0 * fx + fb) / 6.0,
        Family::Trapezoid => (fa + fb) / 2.0,
        _ => fx,
    };
    let lhs = (stated - s * k.fractional_term).abs();
    let scaled_kf = s * k.lhs_direct.abs();
    let mut e = Evaluation::inequality(lhs, s * bound(n, f, params, cfg)?, tol).with("scaled_kf", scaled_kf);
    if !agrees(lhs, scaled_kf) {
        e.consistent = false;
        e.notes.push(format!("stated left-hand side {lhs} differs from scaled |K_f| {scaled_kf}"));
    }
    Ok(e)
}

/// The Ostrowski inequalities exactly as printed, for cross-reporting.
fn ostrowski_printed(n: u8, params: &InequalityParams, sup: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let InequalityParams { a, b, theta, alpha, m, q, .. } = *params;
    let (l1, l2) = (params.ln_x_over_a(), params.ln_b_over_x());
    let pa = a.powf(m) * l1.powf(theta + 1.0);
    let pb = b.powf(m) * l2.powf(theta + 1.0);
    let lead = m * sup;
    Ok(match n {
        5 => {
            let c = |k| c_k(k, params, cfg);
            lead / (theta + 1.0).powf(1.0 - 1.0 / q)
                * (pa * (c(1)? + m * c(2)?).powf(1.0 / q) + pb * (c(3)? + m * c(4)?).powf(1.0 / q))
        }
        6 => {
            // R4 is printed without its factor m
            let p = params.holder_p()?;
            let r = |k| r_k(k, params, cfg);
            lead / (theta * p + 1.0).powf(1.0 / p)
                * (pa * (r(1)? + m * r(2)?).powf(1.0 / q) + pb * (r(3)? + r(4)?).powf(1.0 / q))
        }
        7 => {
            let p = params.holder_p()?;
            lead * ((1.0 + m * alpha) / (alpha + 1.0)).powf(1.0 / q)
                * (pa * t_k(1, params, cfg)?.powf(1.0 / p) + pb * t_k(2, params, cfg)?.powf(1.0 / p))
        }
        8 => {
            let p = params.holder_p()?;
            let tq = theta * q;
            let v = 1.0 / (tq + alpha + 1.0) + (m / (tq + 1.0) - m / (tq + alpha + 1.0));
            lead * v.powf(1.0 / q) * (pa * v34(3, params)?.powf(1.0 / p) + pb * v34(4, params)?.powf(1.0 / p))
        }
        _ => return Err(Error::Params(format!("no Ostrowski form for {n}"))),
    })
}

fn ostrowski(n: u8, f: &FunctionSpec, params: &InequalityParams, cfg: &QuadratureConfig, tol: f64) -> Result<Evaluation> {
    let InequalityParams { a, b, theta, m, .. } = *params;
    let (lo, hi) = hypothesis_interval(a, b, m);
    let sup = derivative_sup(f, lo, hi)?;
    let mt = m.powf(theta);
    let k = kf_direct(f, params, cfg)?;
    let rhs = bound_with(n, DerivAbs::uniform(sup), params, cfg)? / mt;
    let printed = ostrowski_printed(n, params, sup, cfg)?;
    let mut e = Evaluation::inequality(k.lhs_direct.abs() / mt, rhs, tol)
        .with("sup_abs_derivative", sup)
        .with("printed_form", printed);
    if (printed - rhs).abs() > 1e-12 * rhs.abs().max(1e-300) {
        e.notes.push(format!("printed form gives {printed}, parent bound gives {rhs}"));
    }
    Ok(e)
}

fn remark_check(statement: Statement, f: &FunctionSpec, params: &InequalityParams, cfg: &QuadratureConfig, tol: f64) -> Result<Evaluation> {
    let InequalityParams { a, b, alpha, q, .. } = *params;
    let (rhs, route) = match statement {
        Statement::Remark19MidpointPm => (remark::midpoint_power_mean_rhs(f, a, b, alpha, q)?, Statement::Midpoint(5)),
        _ => (remark::midpoint_holder_rhs(f, a, b, alpha, q)?, Statement::Midpoint(6)),
    };
    let lhs = remark::midpoint_lhs(f, a, b)?;
    let fractional = midpoint_family(route, f, params, cfg, tol)?;
    let mut e = Evaluation::inequality(lhs, rhs, tol)
        .with("corollary_lhs", fractional.lhs)
        .with("corollary_rhs", fractional.rhs);
    for (what, mine, theirs) in [("left", lhs, fractional.lhs), ("right", rhs, fractional.rhs)] {
        if !agrees(mine, theirs) {
            e.consistent = false;
            e.notes.push(format!("{what}-hand sides disagree: classical {mine}, fractional {theirs}"));
        }
    }
    Ok(e)
}

/// Computes both sides of `statement` at `rp`.
pub fn evaluate_values(
    statement: Statement,
    f: &FunctionSpec,
    rp: &RecordParams,
    cfg: &QuadratureConfig,
    tol: f64,
) -> Result<Evaluation> {
    let params = rp.to_inequality();
    params.validate()?;
    match statement {
        Statement::Lemma2 => {
            let k = kf_lhs(f, &params, cfg)?;
            let gap = (k.lhs_direct - k.rhs_identity).abs();
            Ok(Evaluation {
                lhs: k.lhs_direct,
                rhs: k.rhs_identity,
                slack: -gap,
                within_tol: gap <= tol * k.lhs_direct.abs().max(1.0),
                consistent: true,
                detail: BTreeMap::new(),
                notes: Vec::new(),
            }
            .with("boundary_term", k.boundary_term)
            .with("fractional_term", k.fractional_term))
        }
        Statement::Thm4 => {
            let c = hh_chain(f, params.a, params.b, params.theta, cfg)?;
            let low = c.middle - c.left;
            let high = c.right - c.middle;
            let ok = |d: f64, u: f64, v: f64| d >= -allowance(tol, u, v);
            Ok(Evaluation {
                lhs: c.left,
                rhs: c.right,
                slack: low.min(high),
                within_tol: ok(low, c.left, c.middle) && ok(high, c.middle, c.right),
                consistent: true,
                detail: BTreeMap::new(),
                notes: Vec::new(),
            }
            .with("middle", c.middle))
        }
        Statement::Thm(n) => {
            let k = kf_direct(f, &params, cfg)?;
            Ok(Evaluation::inequality(k.lhs_direct.abs(), bound(n, f, &params, cfg)?, tol).with("kf", k.lhs_direct))
        }
        Statement::Simpson(_) | Statement::Midpoint(_) | Statement::Trapezoid(_) => {
            midpoint_family(statement, f, &params, cfg, tol)
        }
        Statement::Ostrowski(n) => ostrowski(n, f, &params, cfg, tol),
        Statement::Remark19MidpointPm | Statement::Remark19MidpointHolder => remark_check(statement, f, &params, cfg, tol),
    }
}

/// Assembles the record for `statement`. `screening` is the outcome of the
/// statement's convexity hypothesis: `None` when it has none.
pub fn evaluate(
    statement: Statement,
    f: &FunctionSpec,
    rp: &RecordParams,
    cfg: &QuadratureConfig,
    screening: Option<std::result::Result<&ConvexityVerdict, &str>>,
    verdict_tol: f64,
) -> VerificationRecord {
    let mut record = VerificationRecord {
        function: f.name.clone(),
        statement,
        params: *rp,
        lhs: f64::NAN,
        rhs: f64::NAN,
        slack: f64::NAN,
        verdict: Verdict::NumericFail,
        convexity: None,
        verdict_tol,
        detail: BTreeMap::new(),
        notes: Vec::new(),
    };
    let certified = match screening {
        None => true,
        Some(Ok(v)) => {
            record.convexity = Some(v.clone());
            v.certified
        }
        Some(Err(why)) => {
            record.notes.push(format!("convexity screening unavailable: {why}"));
            false
        }
    };
    match evaluate_values(statement, f, rp, cfg, verdict_tol) {
        Ok(e) => {
            record.lhs = e.lhs;
            record.rhs = e.rhs;
            record.slack = e.slack;
            record.detail = e.detail;
            record.notes.extend(e.notes);
            record.verdict = if !e.consistent {
                Verdict::NumericFail
            } else if !certified {
                Verdict::SkippedConvexity
            } else if e.within_tol {
                Verdict::Holds
            } else {
                Verdict::Violated
            };
        }
        Err(err) => record.notes.push(err.to_string()),
    }
    record
}

/// Screens the hypothesis with default grid settings and evaluates one
/// corollary at the grid point `base`.
pub fn corollary(
    statement: Statement,
    f: &FunctionSpec,
    base: &InequalityParams,
    cfg: &QuadratureConfig,
    verdict_tol: f64,
) -> Result<VerificationRecord> {
    if matches!(statement.family(), Family::Lemma2 | Family::Thm4 | Family::Theorem) {
        return Err(Error::Params(format!("{statement} is not a corollary")));
    }
    let rp = statement
        .canonical(base)
        .ok_or_else(|| Error::Params(format!("{statement} does not apply at {base:?}")))?;
    let screen = statement
        .hypothesis(&rp)
        .map(|h| h.screen(f, DEFAULT_GRID_N, DEFAULT_TOL).map_err(|e| e.to_string()));
    let screening = screen.as_ref().map(|r| r.as_ref().map_err(String::as_str));
    Ok(evaluate(statement, f, &rp, cfg, screening, verdict_tol))
}
