use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{HarnessError, ReportFormat};
use crate::convexity::{DEFAULT_GRID_N, DEFAULT_TOL};
use crate::expr::{catalog, FunctionSpec};
use crate::ineq::Statement;
use crate::quad::QuadratureConfig;

/// A function to sweep: a catalog name, a bare expression in `u`, or an
/// expression with a name and domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionRef {
    Named(String),
    Custom {
        name: Option<String>,
        expr: String,
        lo: Option<f64>,
        hi: Option<f64>,
    },
}

impl FunctionRef {
    pub fn resolve(&self) -> Result<FunctionSpec, HarnessError> {
        let parse = |name: &str, src: &str, lo: f64, hi: f64| {
            FunctionSpec::parse(name, src, lo, hi).map_err(|e| HarnessError::Config(format!("function `{src}`: {e}")))
        };
        match self {
            FunctionRef::Named(s) => match catalog::lookup(s) {
                Some(f) => Ok(f),
                None => parse(s, s, f64::MIN_POSITIVE, f64::INFINITY),
            },
            FunctionRef::Custom { name, expr, lo, hi } => parse(
                name.as_deref().unwrap_or(expr),
                expr,
                lo.unwrap_or(f64::MIN_POSITIVE),
                hi.unwrap_or(f64::INFINITY),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Option<ReportFormat>,
}

/// Everything a sweep needs. Missing fields take the default grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub functions: Vec<FunctionRef>,
    pub a_values: Vec<f64>,
    /// `b = a·ratio`
    pub b_ratios: Vec<f64>,
    /// geometric quantiles of `[a, b]`: `x = a·(b/a)^s`
    pub x_quantiles: Vec<f64>,
    pub theta_values: Vec<f64>,
    pub lambda_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub m_values: Vec<f64>,
    pub q_values: Vec<f64>,
    pub statements: Vec<Statement>,
    pub quadrature: QuadratureConfig,
    pub convexity_grid_n: usize,
    pub convexity_tol: f64,
    pub verdict_tol: f64,
    pub output: Option<OutputSpec>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            functions: ["u", "u^2", "u^3", "ln(u)", "exp(u/4)", "u^-1"]
                .iter()
                .map(|s| FunctionRef::Named(s.to_string()))
                .collect(),
            a_values: vec![0.5, 1.0, 2.0],
            b_ratios: vec![1.5, 2.0, 4.0],
            x_quantiles: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            theta_values: vec![0.5, 1.0, 2.5],
            lambda_values: vec![0.0, 1.0 / 3.0, 0.5, 1.0],
            alpha_values: vec![0.25, 0.5, 1.0],
            m_values: vec![0.5, 0.9, 1.0],
            q_values: vec![1.0, 2.0, 3.0],
            statements: Statement::all(),
            quadrature: QuadratureConfig::default(),
            convexity_grid_n: DEFAULT_GRID_N,
            convexity_tol: DEFAULT_TOL,
            verdict_tol: 1e-7,
            output: None,
        }
    }
}

impl SweepConfig {
    /// Reads a `.toml` or `.json` file.
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let cfg: SweepConfig = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?,
            Some("toml") => toml::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?,
            _ => {
                return Err(HarnessError::Config(format!(
                    "{}: config must end in .toml or .json",
                    path.display()
                )))
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let lists: [(&str, usize); 8] = [
            ("a_values", self.a_values.len()),
            ("b_ratios", self.b_ratios.len()),
            ("x_quantiles", self.x_quantiles.len()),
            ("theta_values", self.theta_values.len()),
            ("lambda_values", self.lambda_values.len()),
            ("alpha_values", self.alpha_values.len()),
            ("m_values", self.m_values.len()),
            ("q_values", self.q_values.len()),
        ];
        for (name, len) in lists {
            if len == 0 {
                return Err(HarnessError::Config(format!("{name} must not be empty")));
            }
        }
        if self.functions.is_empty() || self.statements.is_empty() {
            return Err(HarnessError::Config("functions and statements must not be empty".into()));
        }
        if !(self.verdict_tol > 0.0) || !(self.convexity_tol >= 0.0) || self.convexity_grid_n < 8 {
            return Err(HarnessError::Config(format!(
                "need verdict_tol > 0, convexity_tol >= 0, convexity_grid_n >= 8 (got {}, {}, {})",
                self.verdict_tol, self.convexity_tol, self.convexity_grid_n
            )));
        }
        self.quadrature
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(())
    }
}
