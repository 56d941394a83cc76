//! Right-hand sides of the four fractional bounds on `|K_f|`.
//!
//! Each bound is written over the derivative magnitudes it needs, so the
//! Ostrowski forms reuse the same code with `|f′| ≤ M` substituted.

use serde::{Deserialize, Serialize};

use crate::constants::{c0, c_k, r0, r_k, t_k, v12, v34, InequalityParams};
use crate::convexity::geometric_grid;
use crate::expr::FunctionSpec;
use crate::quad::QuadratureConfig;
use crate::{Error, Result};

/// `|f′(x^m)|`, `|f′(a)|`, `|f′(b)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivAbs {
    pub at_xm: f64,
    pub at_a: f64,
    pub at_b: f64,
}

impl DerivAbs {
    pub fn of(f: &FunctionSpec, params: &InequalityParams) -> Result<Self> {
        Ok(Self {
            at_xm: f.eval_deriv(params.x.powf(params.m))?.abs(),
            at_a: f.eval_deriv(params.a)?.abs(),
            at_b: f.eval_deriv(params.b)?.abs(),
        })
    }

    /// Every magnitude replaced by the bound `M`.
    pub fn uniform(bound: f64) -> Self {
        Self { at_xm: bound, at_a: bound, at_b: bound }
    }
}

/// Number of grid points used to estimate `sup |f′|`.
pub const SUP_GRID_POINTS: usize = 4096;
/// Inflation applied to the grid supremum.
pub const SUP_SAFETY: f64 = 1.0 + 1e-9;

/// Interval `[min(a, a^m), max(b, b^m)]` on which `f` and `f′` are
/// sampled by the bounds and their hypotheses.
pub fn hypothesis_interval(a: f64, b: f64, m: f64) -> (f64, f64) {
    (a.min(a.powf(m)), b.max(b.powf(m)))
}

/// Grid estimate of `M = sup |f′|` over `[lo, hi]`, inflated by [`SUP_SAFETY`].
pub fn derivative_sup(f: &FunctionSpec, lo: f64, hi: f64) -> Result<f64> {
    let mut sup = 0.0f64;
    for u in geometric_grid(lo, hi, SUP_GRID_POINTS) {
        sup = sup.max(f.eval_deriv(u)?.abs());
    }
    Ok(sup * SUP_SAFETY)
}

/// `a^m ln^(θ+1)(x/a)` and `b^m ln^(θ+1)(b/x)`; `None` where the log vanishes.
fn prefactors(params: &InequalityParams) -> (Option<f64>, Option<f64>) {
    let InequalityParams { a, b, theta, m, .. } = *params;
    let (l1, l2) = (params.ln_x_over_a(), params.ln_b_over_x());
    (
        (l1 > 0.0).then(|| a.powf(m) * l1.powf(theta + 1.0)),
        (l2 > 0.0).then(|| b.powf(m) * l2.powf(theta + 1.0)),
    )
}

fn outer(params: &InequalityParams) -> f64 {
    params.m.powf(params.theta + 1.0)
}

/// Power-mean bound, valid for `q ≥ 1`.
pub fn bound_thm5_with(d: DerivAbs, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    params.validate()?;
    let InequalityParams { theta, lambda, m, q, .. } = *params;
    let (pa, pb) = prefactors(params);
    let dx = d.at_xm.powf(q);
    let mut sum = 0.0;
    if let Some(pa) = pa {
        sum += pa * (dx * c_k(1, params, cfg)? + m * d.at_a.powf(q) * c_k(2, params, cfg)?).powf(1.0 / q);
    }
    if let Some(pb) = pb {
        sum += pb * (dx * c_k(3, params, cfg)? + m * d.at_b.powf(q) * c_k(4, params, cfg)?).powf(1.0 / q);
    }
    Ok(outer(params) * c0(theta, lambda).powf(1.0 - 1.0 / q) * sum)
}

/// Hölder bound with `R0..R4`, `q > 1`.
pub fn bound_thm6_with(d: DerivAbs, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    params.validate()?;
    let p = params.holder_p()?;
    let InequalityParams { theta, lambda, m, q, .. } = *params;
    let (pa, pb) = prefactors(params);
    let dx = d.at_xm.powf(q);
    let mut sum = 0.0;
    if let Some(pa) = pa {
        sum += pa * (dx * r_k(1, params, cfg)? + m * d.at_a.powf(q) * r_k(2, params, cfg)?).powf(1.0 / q);
    }
    if let Some(pb) = pb {
        sum += pb * (dx * r_k(3, params, cfg)? + m * d.at_b.powf(q) * r_k(4, params, cfg)?).powf(1.0 / q);
    }
    Ok(outer(params) * r0(theta, lambda, p)?.powf(1.0 / p) * sum)
}

/// Hölder bound with `T1, T2`, `q > 1`.
pub fn bound_thm7_with(d: DerivAbs, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    params.validate()?;
    let p = params.holder_p()?;
    let InequalityParams { alpha, m, q, .. } = *params;
    let (pa, pb) = prefactors(params);
    let dx = d.at_xm.powf(q);
    let avg = |end: f64| ((dx + m * alpha * end.powf(q)) / (alpha + 1.0)).powf(1.0 / q);
    let mut sum = 0.0;
    if let Some(pa) = pa {
        sum += pa * t_k(1, params, cfg)?.powf(1.0 / p) * avg(d.at_a);
    }
    if let Some(pb) = pb {
        sum += pb * t_k(2, params, cfg)?.powf(1.0 / p) * avg(d.at_b);
    }
    Ok(outer(params) * sum)
}

/// Hölder bound with `V1..V4`, `q > 1`.
pub fn bound_thm8_with(d: DerivAbs, params: &InequalityParams, _cfg: &QuadratureConfig) -> Result<f64> {
    params.validate()?;
    let p = params.holder_p()?;
    let InequalityParams { theta, lambda, alpha, m, q, .. } = *params;
    let (pa, pb) = prefactors(params);
    let v1 = v12(1, theta, lambda, alpha, q)?;
    let v2 = v12(2, theta, lambda, alpha, q)?;
    let dx = d.at_xm.powf(q);
    let mut sum = 0.0;
    if let Some(pa) = pa {
        sum += pa * v34(3, params)?.powf(1.0 / p) * (v1 * dx + m * v2 * d.at_a.powf(q)).powf(1.0 / q);
    }
    if let Some(pb) = pb {
        sum += pb * v34(4, params)?.powf(1.0 / p) * (v1 * dx + m * v2 * d.at_b.powf(q)).powf(1.0 / q);
    }
    Ok(outer(params) * sum)
}

/// Bound of theorem `n ∈ {5, 6, 7, 8}` for the given derivative magnitudes.
pub fn bound_with(n: u8, d: DerivAbs, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    match n {
        5 => bound_thm5_with(d, params, cfg),
        6 => bound_thm6_with(d, params, cfg),
        7 => bound_thm7_with(d, params, cfg),
        8 => bound_thm8_with(d, params, cfg),
        _ => Err(Error::Params(format!("no bound numbered {n}"))),
    }
}

pub fn bound_thm5(f: &FunctionSpec, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    bound_thm5_with(DerivAbs::of(f, params)?, params, cfg)
}

pub fn bound_thm6(f: &FunctionSpec, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    bound_thm6_with(DerivAbs::of(f, params)?, params, cfg)
}

pub fn bound_thm7(f: &FunctionSpec, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    bound_thm7_with(DerivAbs::of(f, params)?, params, cfg)
}

pub fn bound_thm8(f: &FunctionSpec, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    bound_thm8_with(DerivAbs::of(f, params)?, params, cfg)
}

pub fn bound(n: u8, f: &FunctionSpec, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    bound_with(n, DerivAbs::of(f, params)?, params, cfg)
}
