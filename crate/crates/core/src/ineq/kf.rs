//! The functional `K_f(λ, θ, x^m, a^m, b^m)`, its integral identity, and
//! the Hermite–Hadamard chain for fractional integrals.

use serde::{Deserialize, Serialize};

use crate::constants::InequalityParams;
use crate::expr::FunctionSpec;
use crate::quad::{hadamard_left, hadamard_right, try_integrate, QuadratureConfig};
use crate::specfun::gamma;
use crate::{Error, Result};

/// `K_f` from its definition: boundary term minus fractional term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KfDirect {
    pub boundary_term: f64,
    pub fractional_term: f64,
    pub lhs_direct: f64,
}

/// Both evaluations of `K_f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KfDecomposition {
    pub lhs_direct: f64,
    pub rhs_identity: f64,
    pub boundary_term: f64,
    pub fractional_term: f64,
}

/// The two integral terms of the identity; `K_f = a_part − b_part`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityParts {
    pub a_part: f64,
    pub b_part: f64,
}

/// `J_{x^m−}^θ f(a^m)` and `J_{x^m+}^θ f(b^m)`. A side whose interval has
/// collapsed (x = a or x = b) is exactly 0.
pub fn fractional_integrals(f: &FunctionSpec, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let InequalityParams { a, b, x, theta, m, .. } = *params;
    let (am, bm, xm) = (a.powf(m), b.powf(m), x.powf(m));
    let left = if x > a { hadamard_right(f, am, xm, theta, cfg)? } else { 0.0 };
    let right = if x < b { hadamard_left(f, xm, bm, theta, cfg)? } else { 0.0 };
    Ok((left, right))
}

/// `K_f` assembled from point values and Hadamard integrals.
pub fn kf_direct(f: &FunctionSpec, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<KfDirect> {
    params.validate()?;
    let InequalityParams { a, b, x, theta, lambda, m, .. } = *params;
    let (la, lb) = (params.ln_x_over_a().powf(theta), params.ln_b_over_x().powf(theta));
    let mt = m.powf(theta);
    let mut boundary_term = (1.0 - lambda) * mt * (la + lb) * f.eval(x.powf(m))?;
    if lambda > 0.0 {
        boundary_term += lambda * mt * (f.eval(a.powf(m))? * la + f.eval(b.powf(m))? * lb);
    }
    let (j_left, j_right) = fractional_integrals(f, params, cfg)?;
    let fractional_term = gamma(theta + 1.0)? * (j_left + j_right);
    Ok(KfDirect {
        boundary_term,
        fractional_term,
        lhs_direct: boundary_term - fractional_term,
    })
}

/// `∫₀¹ (t^θ − λ) e^(s·t) f′(base·e^(s·t)) dt`.
fn identity_integral(f: &FunctionSpec, base: f64, s: f64, theta: f64, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let r = try_integrate(
        |t: f64| {
            let e = (s * t).exp();
            Ok::<f64, Error>((t.powf(theta) - lambda) * e * f.eval_deriv(base * e)?)
        },
        0.0,
        1.0,
        cfg,
    )?;
    Ok(r.value)
}

/// The two terms of the integral identity for `K_f`, in terms of `f′`.
pub fn kf_rhs_parts(f: &FunctionSpec, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<IdentityParts> {
    params.validate()?;
    let InequalityParams { a, b, theta, lambda, m, .. } = *params;
    let (l1, l2) = (params.ln_x_over_a(), params.ln_b_over_x());
    let scale = m.powf(theta + 1.0);
    let a_part = if l1 > 0.0 {
        let am = a.powf(m);
        scale * am * l1.powf(theta + 1.0) * identity_integral(f, am, m * l1, theta, lambda, cfg)?
    } else {
        0.0
    };
    let b_part = if l2 > 0.0 {
        let bm = b.powf(m);
        scale * bm * l2.powf(theta + 1.0) * identity_integral(f, bm, -m * l2, theta, lambda, cfg)?
    } else {
        0.0
    };
    Ok(IdentityParts { a_part, b_part })
}

pub fn kf_rhs_identity(f: &FunctionSpec, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<f64> {
    let parts = kf_rhs_parts(f, params, cfg)?;
    Ok(parts.a_part - parts.b_part)
}

/// Both evaluations of `K_f` side by side.
pub fn kf_lhs(f: &FunctionSpec, params: &InequalityParams, cfg: &QuadratureConfig) -> Result<KfDecomposition> {
    let d = kf_direct(f, params, cfg)?;
    Ok(KfDecomposition {
        lhs_direct: d.lhs_direct,
        rhs_identity: kf_rhs_identity(f, params, cfg)?,
        boundary_term: d.boundary_term,
        fractional_term: d.fractional_term,
    })
}

/// Values of the Hermite–Hadamard chain
/// `f(√(ab)) ≤ Γ(θ+1)/(2 ln^θ(b/a))·[J_{a+}^θ f(b) + J_{b−}^θ f(a)] ≤ (f(a) + f(b))/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HhChain {
    pub left: f64,
    pub middle: f64,
    pub right: f64,
}

pub fn hh_chain(f: &FunctionSpec, a: f64, b: f64, theta: f64, cfg: &QuadratureConfig) -> Result<HhChain> {
    if !(a > 0.0 && a < b && b.is_finite()) || !(theta > 0.0) {
        return Err(Error::Params(format!("need 0 < a < b and theta > 0, got a = {a}, b = {b}, theta = {theta}")));
    }
    let j = hadamard_left(f, a, b, theta, cfg)? + hadamard_right(f, a, b, theta, cfg)?;
    Ok(HhChain {
        left: f.eval((a * b).sqrt())?,
        middle: gamma(theta + 1.0)? / (2.0 * (b / a).ln().powf(theta)) * j,
        right: 0.5 * (f.eval(a)? + f.eval(b)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::catalog;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig { rel_tol: 1e-12, abs_tol: 1e-14, max_subdivisions: 2000 }
    }

    fn params(a: f64, b: f64, x: f64, theta: f64, lambda: f64, m: f64) -> InequalityParams {
        InequalityParams::new(a, b, x, theta, lambda, 1.0, m, 1.0)
    }

    #[test]
    fn constant_gives_zero_at_m_one() {
        let f = catalog::constant(2.0);
        for &(x, theta, lambda) in &[(1.5, 0.5, 0.0), (1.0, 1.0, 0.5), (3.0, 2.5, 1.0), (2.0, 0.3, 1.0 / 3.0)] {
            let k = kf_lhs(&f, &params(1.0, 3.0, x, theta, lambda, 1.0), &cfg()).unwrap();
            assert!(k.lhs_direct.abs() < 1e-12, "{k:?}");
            assert_eq!(k.rhs_identity, 0.0);
            assert_eq!(k.lhs_direct, k.boundary_term - k.fractional_term);
        }
    }

    #[test]
    fn log_symmetric_case_is_zero() {
        let e = std::f64::consts::E;
        let k = kf_direct(&catalog::ln(), &params(1.0, e * e, e, 1.0, 0.0, 1.0), &cfg()).unwrap();
        assert!((k.boundary_term - 2.0).abs() < 1e-14);
        assert!((k.fractional_term - 2.0).abs() < 1e-12);
        assert!(k.lhs_direct.abs() < 1e-12);
    }

    #[test]
    fn square_fixture_matches_oracle() {
        // mpmath, both sides of the identity
        let expected = 0.022_319_161_745_845_337;
        let k = kf_lhs(&catalog::square(), &params(1.0, 4.0, 2.0, 1.5, 1.0 / 3.0, 0.5), &cfg()).unwrap();
        assert!((k.lhs_direct - expected).abs() < 1e-12, "{k:?}");
        assert!((k.rhs_identity - expected).abs() < 1e-12, "{k:?}");
    }

    #[test]
    fn degenerate_endpoints() {
        let f = catalog::cube();
        for &(x, theta) in &[(1.0, 0.5), (4.0, 0.5), (1.0, 2.5), (4.0, 1.0)] {
            let k = kf_lhs(&f, &params(1.0, 4.0, x, theta, 0.25, 0.9), &cfg()).unwrap();
            assert!((k.lhs_direct - k.rhs_identity).abs() < 1e-9 * k.lhs_direct.abs().max(1.0), "{k:?}");
        }
    }

    #[test]
    fn hh_chain_examples() {
        let c = hh_chain(&catalog::constant(3.0), 0.5, 2.0, 0.7, &cfg()).unwrap();
        for v in [c.left, c.middle, c.right] {
            assert!((v - 3.0).abs() < 1e-12);
        }
        let c = hh_chain(&catalog::identity(), 1.0, 4.0, 1.0, &cfg()).unwrap();
        assert!((c.left - 2.0).abs() < 1e-15);
        assert!((c.middle - 2.164_042_561_333_445).abs() < 1e-12);
        assert_eq!(c.right, 2.5);
        let c = hh_chain(&catalog::ln(), 2.0, 8.0, 2.5, &cfg()).unwrap();
        let mid = 16f64.ln() / 2.0;
        for v in [c.left, c.middle, c.right] {
            assert!((v - mid).abs() < 1e-12);
        }
        assert!(hh_chain(&catalog::ln(), 2.0, 1.0, 1.0, &cfg()).is_err());
    }
}
