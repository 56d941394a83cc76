use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{parse, Expr, ExprError};

/// A scalar map `u ↦ value`, either parsed or native Rust.
#[derive(Clone)]
pub enum ScalarFn {
    Expr(Arc<Expr>),
    Native(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl ScalarFn {
    pub fn native(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarFn::Native(Arc::new(f))
    }

    fn eval(&self, u: f64) -> Result<f64, ExprError> {
        match self {
            ScalarFn::Expr(e) => e.eval(u),
            ScalarFn::Native(f) => {
                let v = f(u);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(ExprError::NonFinite { at: u })
                }
            }
        }
    }
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Expr(e) => write!(f, "Expr({e})"),
            ScalarFn::Native(_) => write!(f, "Native"),
        }
    }
}

/// An `(α, m, q)` triple for which `|f′|^q` is known to be
/// (α,m)-GA-convex on the whole domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityHint {
    pub alpha: f64,
    pub m: f64,
    pub q: f64,
}

/// A function on a positive domain together with its derivative.
#[derive(Debug, Clone)]
pub struct FunctionSpec {
    pub name: String,
    f: ScalarFn,
    df: ScalarFn,
    pub domain_lo: f64,
    pub domain_hi: f64,
    pub convexity_hints: Vec<ConvexityHint>,
}

// evaluation points produced by exp/ln round trips can land a few ulps
// outside a closed domain
const DOMAIN_SLACK: f64 = 1e-12;

impl FunctionSpec {
    pub fn new(name: impl Into<String>, f: ScalarFn, df: ScalarFn, domain_lo: f64, domain_hi: f64) -> Result<Self, ExprError> {
        if !(domain_lo > 0.0) || !(domain_hi > domain_lo) {
            return Err(ExprError::OutsideDomain { at: domain_lo, lo: domain_lo, hi: domain_hi });
        }
        Ok(Self {
            name: name.into(),
            f,
            df,
            domain_lo,
            domain_hi,
            convexity_hints: Vec::new(),
        })
    }

    /// Parses `src` and differentiates it symbolically.
    pub fn parse(name: impl Into<String>, src: &str, domain_lo: f64, domain_hi: f64) -> Result<Self, ExprError> {
        let e = parse(src)?;
        let d = e.derivative();
        Self::new(name, ScalarFn::Expr(Arc::new(e)), ScalarFn::Expr(Arc::new(d)), domain_lo, domain_hi)
    }

    pub fn with_hints(mut self, hints: Vec<ConvexityHint>) -> Self {
        self.convexity_hints = hints;
        self
    }

    pub fn contains(&self, u: f64) -> bool {
        u >= self.domain_lo * (1.0 - DOMAIN_SLACK) && u <= self.domain_hi * (1.0 + DOMAIN_SLACK)
    }

    /// True when `[lo, hi]` lies inside the domain.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.contains(lo) && self.contains(hi)
    }

    fn check(&self, u: f64) -> Result<(), ExprError> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(ExprError::OutsideDomain { at: u, lo: self.domain_lo, hi: self.domain_hi })
        }
    }

    pub fn eval(&self, u: f64) -> Result<f64, ExprError> {
        self.check(u)?;
        self.f.eval(u)
    }

    pub fn eval_deriv(&self, u: f64) -> Result<f64, ExprError> {
        self.check(u)?;
        self.df.eval(u)
    }

    pub fn value_fn(&self) -> &ScalarFn {
        &self.f
    }

    pub fn deriv_fn(&self) -> &ScalarFn {
        &self.df
    }
}
