//! The constants appearing in the fractional bounds.
//!
//! Every constant is an integral over `t ∈ [0, 1]`. `C0`, `R0`, `V1..V4`
//! also have closed forms; the rest are computed by quadrature only. Any
//! integrand containing `|t^θ − λ|` is split at the kink `t* = λ^(1/θ)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::quad::{integrate, integrate_split, QuadratureConfig};
use crate::specfun::{beta, hyp2f1};
use crate::{Error, Result};

/// Parameters shared by every bound. `p` is the Hölder conjugate of `q`
/// and is only present when `q > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityParams {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub theta: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub m: f64,
    pub q: f64,
    pub p: Option<f64>,
}

/// `q/(q-1)`, or `None` for `q = 1`.
pub fn conjugate(q: f64) -> Option<f64> {
    (q > 1.0).then(|| q / (q - 1.0))
}

impl InequalityParams {
    /// Builds the parameters with `p` derived from `q`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(a: f64, b: f64, x: f64, theta: f64, lambda: f64, alpha: f64, m: f64, q: f64) -> Self {
        Self { a, b, x, theta, lambda, alpha, m, q, p: conjugate(q) }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Params(msg));
        let finite = [self.a, self.b, self.x, self.theta, self.lambda, self.alpha, self.m, self.q];
        if finite.iter().any(|v| !v.is_finite()) {
            return bad(format!("non-finite parameter in {self:?}"));
        }
        if !(self.a > 0.0 && self.a < self.b) {
            return bad(format!("need 0 < a < b, got a = {}, b = {}", self.a, self.b));
        }
        if !(self.x >= self.a && self.x <= self.b) {
            return bad(format!("x = {} outside [{}, {}]", self.x, self.a, self.b));
        }
        if !(self.theta > 0.0) {
            return bad(format!("theta must be > 0, got {}", self.theta));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return bad(format!("lambda must lie in [0, 1], got {}", self.lambda));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if !(self.m > 0.0 && self.m <= 1.0) {
            return bad(format!("m must lie in (0, 1], got {}", self.m));
        }
        if !(self.q >= 1.0) {
            return bad(format!("q must be >= 1, got {}", self.q));
        }
        if let Some(p) = self.p {
            if !(p > 1.0) || (1.0 / p + 1.0 / self.q - 1.0).abs() > 1e-12 {
                return bad(format!("p = {p} is not the conjugate of q = {}", self.q));
            }
        }
        Ok(())
    }

    /// `p`, required by the Hölder-type bounds.
    pub fn holder_p(&self) -> Result<f64> {
        self.p
            .ok_or_else(|| Error::Params(format!("q = {} has no conjugate exponent", self.q)))
    }

    pub fn ln_x_over_a(&self) -> f64 {
        (self.x / self.a).ln()
    }

    pub fn ln_b_over_x(&self) -> f64 {
        (self.b / self.x).ln()
    }

    /// The kink `λ^(1/θ)` of `|t^θ − λ|`.
    pub fn kink(&self) -> f64 {
        kink(self.theta, self.lambda)
    }
}

fn kink(theta: f64, lambda: f64) -> f64 {
    lambda.powf(1.0 / theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConstantTag {
    C0,
    C1,
    C2,
    C3,
    C4,
    R0,
    R1,
    R2,
    R3,
    R4,
    T1,
    T2,
    V1,
    V2,
    V3,
    V4,
}

impl ConstantTag {
    pub const ALL: [ConstantTag; 16] = [
        Self::C0, Self::C1, Self::C2, Self::C3, Self::C4,
        Self::R0, Self::R1, Self::R2, Self::R3, Self::R4,
        Self::T1, Self::T2,
        Self::V1, Self::V2, Self::V3, Self::V4,
    ];

    /// Whether a closed form exists.
    pub fn has_closed_form(self) -> bool {
        matches!(self, Self::C0 | Self::R0 | Self::V1 | Self::V2 | Self::V3 | Self::V4)
    }

    /// Whether the Hölder exponent `p` enters the constant.
    pub fn needs_p(self) -> bool {
        matches!(self, Self::R0 | Self::T1 | Self::T2 | Self::V3 | Self::V4)
    }
}

impl fmt::Display for ConstantTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for ConstantTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|t| t.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Params(format!("unknown constant `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    Quadrature,
}

/// A constant together with the route that produced it. `oracle_delta` is
/// `|closed form − quadrature|` when both routes were computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstant {
    pub tag: ConstantTag,
    pub value: f64,
    pub route: Route,
    pub oracle_delta: Option<f64>,
}

fn kernel(t: f64, theta: f64, lambda: f64) -> f64 {
    (t.powf(theta) - lambda).abs()
}

/// Weight `t^α` (odd k) or `1 − t^α` (even k).
fn weight(k: u8, t: f64, alpha: f64) -> f64 {
    if k % 2 == 1 {
        t.powf(alpha)
    } else {
        1.0 - t.powf(alpha)
    }
}

/// `ln(x/a)` for k ∈ {1, 2} and `ln(x/b)` for k ∈ {3, 4}.
fn log_ratio(k: u8, params: &InequalityParams) -> f64 {
    if k <= 2 {
        params.ln_x_over_a()
    } else {
        -params.ln_b_over_x()
    }
}

fn check_index(k: u8, max: u8, name: &str) -> Result<()> {
    if (1..=max).contains(&k) {
        Ok(())
    } else {
        Err(Error::Params(format!("{name} index must lie in 1..={max}, got {k}")))
    }
}

fn kinked<F: FnMut(f64) -> f64>(f: F, theta: f64, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(integrate_split(f, 0.0, 1.0, kink(theta, lambda), cfg)?.value)
}

/// `C0 = ∫₀¹|t^θ − λ| dt = (2θλ^(1+1/θ) + 1)/(θ+1) − λ`.
pub fn c0(theta: f64, lambda: f64) -> f64 {
    (2.0 * theta * lambda.powf(1.0 + 1.0 / theta) + 1.0) / (theta + 1.0) - lambda
}

pub fn c0_quadrature(theta: f64, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    kinked(|t| kernel(t, theta, lambda), theta, lambda, cfg)
}

/// `C_k = ∫₀¹|t^θ − λ| r^(qmt) w(t) dt` with `r = x/a` or `x/b`.
pub fn c_k(k: u8, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    check_index(k, 4, "C")?;
    let s = params.q * params.m * log_ratio(k, params);
    let (theta, lambda, alpha) = (params.theta, params.lambda, params.alpha);
    kinked(
        |t| kernel(t, theta, lambda) * (s * t).exp() * weight(k, t, alpha),
        theta,
        lambda,
        cfg,
    )
}

/// `R0 = ∫₀¹|t^θ − λ|^p dt` by its three-branch closed form.
pub fn r0(theta: f64, lambda: f64, p: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(1.0 / (theta * p + 1.0));
    }
    let head = beta(1.0 / theta, p + 1.0)? / theta;
    if lambda == 1.0 {
        return Ok(head);
    }
    let tail = (1.0 - lambda).powf(p + 1.0) / (theta * (p + 1.0))
        * hyp2f1(1.0 - 1.0 / theta, 1.0, p + 2.0, 1.0 - lambda)?;
    Ok(lambda.powf((theta * p + 1.0) / theta) * head + tail)
}

pub fn r0_quadrature(theta: f64, lambda: f64, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    kinked(|t| kernel(t, theta, lambda).powf(p), theta, lambda, cfg)
}

/// `R_k = ∫₀¹ r^(mqt) w(t) dt`.
pub fn r_k(k: u8, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    check_index(k, 4, "R")?;
    let s = params.m * params.q * log_ratio(k, params);
    let alpha = params.alpha;
    Ok(integrate(|t| (s * t).exp() * weight(k, t, alpha), 0.0, 1.0, cfg)?.value)
}

/// `T_k = ∫₀¹|t^θ − λ|^p r^(mpt) dt`, `r = x/a` (k = 1) or `x/b` (k = 2).
pub fn t_k(k: u8, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    check_index(k, 2, "T")?;
    let p = params.holder_p()?;
    let s = params.m * p * log_ratio(2 * k - 1, params);
    let (theta, lambda) = (params.theta, params.lambda);
    kinked(|t| kernel(t, theta, lambda).powf(p) * (s * t).exp(), theta, lambda, cfg)
}

/// `V1 = ∫₀¹|t^θ − λ|^q t^α dt`, `V2 = ∫₀¹|t^θ − λ|^q (1 − t^α) dt`, by
/// their closed forms.
pub fn v12(which: u8, theta: f64, lambda: f64, alpha: f64, q: f64) -> Result<f64> {
    let s = (alpha + 1.0) / theta;
    let v1 = || -> Result<f64> {
        if lambda == 0.0 {
            return Ok(1.0 / (theta * q + alpha + 1.0));
        }
        let head = beta(s, q + 1.0)? / theta;
        if lambda == 1.0 {
            return Ok(head);
        }
        Ok(lambda.powf((theta * q + alpha + 1.0) / theta) * head
            + (1.0 - lambda).powf(q + 1.0) / (theta * (q + 1.0)) * hyp2f1(1.0 - s, 1.0, q + 2.0, 1.0 - lambda)?)
    };
    match which {
        1 => v1(),
        2 => {
            if lambda == 0.0 {
                return Ok(1.0 / (theta * q + 1.0) - 1.0 / (theta * q + alpha + 1.0));
            }
            let b1 = beta(1.0 / theta, q + 1.0)? / theta;
            let bs = beta(s, q + 1.0)? / theta;
            if lambda == 1.0 {
                return Ok(b1 - bs);
            }
            let z = 1.0 - lambda;
            Ok(lambda.powf((theta * q + 1.0) / theta) * b1 - lambda.powf((theta * q + alpha + 1.0) / theta) * bs
                + z.powf(q + 1.0) / (theta * (q + 1.0))
                    * (hyp2f1(1.0 - 1.0 / theta, 1.0, q + 2.0, z)? - hyp2f1(1.0 - s, 1.0, q + 2.0, z)?))
        }
        _ => Err(Error::Params(format!("V index must be 1 or 2, got {which}"))),
    }
}

pub fn v12_quadrature(which: u8, theta: f64, lambda: f64, alpha: f64, q: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_index(which, 2, "V")?;
    kinked(
        |t| kernel(t, theta, lambda).powf(q) * weight(which, t, alpha),
        theta,
        lambda,
        cfg,
    )
}

/// `(e^w − 1)/w`, continued by its Taylor polynomial near `w = 0`.
fn expm1_ratio(w: f64) -> f64 {
    if w.abs() < 1e-8 {
        1.0 + w / 2.0 + w * w / 6.0
    } else {
        w.exp_m1() / w
    }
}

fn v34_exponent(which: u8, params: &InequalityParams) -> Result<f64> {
    let p = params.holder_p()?;
    match which {
        3 => Ok(params.m * p * params.ln_x_over_a()),
        4 => Ok(-params.m * p * params.ln_b_over_x()),
        _ => Err(Error::Params(format!("V index must be 3 or 4, got {which}"))),
    }
}

/// `V3 = ∫₀¹ (x/a)^(pmt) dt` and `V4 = ∫₀¹ (x/b)^(pmt) dt` in closed form.
pub fn v34(which: u8, params: &InequalityParams) -> Result<f64> {
    Ok(expm1_ratio(v34_exponent(which, params)?))
}

pub fn v34_quadrature(which: u8, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    let w = v34_exponent(which, params)?;
    Ok(integrate(|t| (w * t).exp(), 0.0, 1.0, cfg)?.value)
}

/// Closed form of `tag`, if it has one.
pub fn closed_form(tag: ConstantTag, params: &InequalityParams) -> Result<Option<f64>> {
    use ConstantTag::*;
    let InequalityParams { theta, lambda, alpha, q, .. } = *params;
    Ok(Some(match tag {
        C0 => c0(theta, lambda),
        R0 => r0(theta, lambda, params.holder_p()?)?,
        V1 => v12(1, theta, lambda, alpha, q)?,
        V2 => v12(2, theta, lambda, alpha, q)?,
        V3 => v34(3, params)?,
        V4 => v34(4, params)?,
        _ => return Ok(None),
    }))
}

/// Direct quadrature of the integral defining `tag`.
pub fn quadrature(tag: ConstantTag, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    use ConstantTag::*;
    let InequalityParams { theta, lambda, alpha, q, .. } = *params;
    match tag {
        C0 => c0_quadrature(theta, lambda, cfg),
        C1 => c_k(1, params, cfg),
        C2 => c_k(2, params, cfg),
        C3 => c_k(3, params, cfg),
        C4 => c_k(4, params, cfg),
        R0 => r0_quadrature(theta, lambda, params.holder_p()?, cfg),
        R1 => r_k(1, params, cfg),
        R2 => r_k(2, params, cfg),
        R3 => r_k(3, params, cfg),
        R4 => r_k(4, params, cfg),
        T1 => t_k(1, params, cfg),
        T2 => t_k(2, params, cfg),
        V1 => v12_quadrature(1, theta, lambda, alpha, q, cfg),
        V2 => v12_quadrature(2, theta, lambda, alpha, q, cfg),
        V3 => v34_quadrature(3, params, cfg),
        V4 => v34_quadrature(4, params, cfg),
    }
}

/// Evaluates `tag` by its preferred route. With `check` set, constants
/// that have a closed form are also integrated and the gap is recorded.
pub fn evaluate(tag: ConstantTag, params: &InequalityParams, cfg: &QuadratureConfig, check: bool) -> Result<BoundConstant> {
    params.validate()?;
    match closed_form(tag, params)? {
        Some(value) => {
            let oracle_delta = if check {
                Some((value - quadrature(tag, params, cfg)?).abs())
            } else {
                None
            };
            Ok(BoundConstant { tag, value, route: Route::ClosedForm, oracle_delta })
        }
        None => Ok(BoundConstant {
            tag,
            value: quadrature(tag, params, cfg)?,
            route: Route::Quadrature,
            oracle_delta: None,
        }),
    }
}
