//! Grid screening of the (α,m)-GA-convexity hypothesis
//! `g(x^t y^(m(1-t))) ≤ t^α g(x) + m(1 - t^α) g(y)`.
//!
//! This is a screening gate, not a proof: the inequality is sampled on a
//! geometric `x, y` grid and a uniform `t` grid that contains 0 and 1.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::expr::{ExprError, FunctionSpec};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreenParams {
    pub alpha: f64,
    pub m: f64,
    pub lo: f64,
    pub hi: f64,
    /// grid points per axis
    pub n: usize,
    /// slack allowed per point, relative to `max(1, |LHS|, |RHS|)`
    pub tol: f64,
}

pub const DEFAULT_GRID_N: usize = 32;
pub const DEFAULT_TOL: f64 = 1e-9;

impl ScreenParams {
    pub fn new(alpha: f64, m: f64, lo: f64, hi: f64) -> Self {
        Self { alpha, m, lo, hi, n: DEFAULT_GRID_N, tol: DEFAULT_TOL }
    }

    fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::Params(msg));
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if !(self.m > 0.0 && self.m <= 1.0) {
            return bad(format!("m must lie in (0, 1], got {}", self.m));
        }
        if !(self.lo > 0.0 && self.lo < self.hi && self.hi.is_finite()) {
            return bad(format!("need 0 < lo < hi, got [{}, {}]", self.lo, self.hi));
        }
        if self.n < 8 {
            return bad(format!("grid density must be >= 8, got {}", self.n));
        }
        if !(self.tol >= 0.0) {
            return bad(format!("tolerance must be >= 0, got {}", self.tol));
        }
        Ok(())
    }
}

/// Point `(x, y, t)` where the sampled inequality is most violated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityVerdict {
    pub certified: bool,
    /// max over the grid of LHS − RHS, floored at 0
    pub worst_violation: f64,
    pub witness: Option<Witness>,
    pub grid_density: usize,
}

/// Smallest interval containing every `x^t y^(m(1-t))` for `x, y ∈ [lo, hi]`.
pub fn evaluation_hull(lo: f64, hi: f64, m: f64) -> (f64, f64) {
    (lo.min(lo.powf(m)), hi.max(hi.powf(m)))
}

/// `n` geometrically spaced points with exact endpoints.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = (hi / lo).ln();
    (0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => lo * (ratio * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

#[derive(Clone, Copy)]
struct Worst {
    diff: f64,
    excess: f64,
    at: Witness,
}

/// Screens `g` for (α,m)-GA-convexity on `[lo, hi]`.
///
/// `domain` is where `g` may be evaluated; the evaluation hull of the grid
/// must fit inside it.
pub fn check_alpha_m_ga<G>(g: G, domain: (f64, f64), params: &ScreenParams) -> Result<ConvexityVerdict, Error>
where
    G: Fn(f64) -> Result<f64, ExprError> + Sync,
{
    params.validate()?;
    let (hull_lo, hull_hi) = evaluation_hull(params.lo, params.hi, params.m);
    let slack = 1e-12;
    if hull_lo < domain.0 * (1.0 - slack) || hull_hi > domain.1 * (1.0 + slack) {
        return Err(Error::Domain(format!(
            "convexity hull [{hull_lo}, {hull_hi}] leaves the function domain [{}, {}]",
            domain.0, domain.1
        )));
    }

    let n = params.n;
    let xs = geometric_grid(params.lo, params.hi, n);
    let ts: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    let gx = xs.iter().map(|&x| g(x)).collect::<Result<Vec<_>, _>>()?;
    let (alpha, m, tol) = (params.alpha, params.m, params.tol);

    let per_x: Vec<Worst> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Worst, Error> {
            let mut worst = Worst {
                diff: f64::NEG_INFINITY,
                excess: f64::NEG_INFINITY,
                at: Witness { x: xs[i], y: xs[0], t: 0.0 },
            };
            for (j, &y) in xs.iter().enumerate() {
                for &t in &ts {
                    let point = xs[i].powf(t) * y.powf(m * (1.0 - t));
                    let lhs = g(point)?;
                    let rhs = m * gx[j] + t.powf(alpha) * (gx[i] - m * gx[j]);
                    let diff = lhs - rhs;
                    worst.excess = worst.excess.max(diff - tol * lhs.abs().max(rhs.abs()).max(1.0));
                    if diff > worst.diff {
                        worst.diff = diff;
                        worst.at = Witness { x: xs[i], y, t };
                    }
                }
            }
            Ok(worst)
        })
        .collect::<Result<_, _>>()?;

    // fold in index order so the witness does not depend on scheduling
    let mut worst: Option<Worst> = None;
    for w in per_x {
        worst = Some(match worst {
            None => w,
            Some(cur) => Worst {
                excess: cur.excess.max(w.excess),
                ..if w.diff > cur.diff { w } else { cur }
            },
        });
    }
    let worst = worst.expect("grid is non-empty");
    let certified = worst.excess <= 0.0;
    Ok(ConvexityVerdict {
        certified,
        worst_violation: worst.diff.max(0.0),
        witness: (!certified).then_some(worst.at),
        grid_density: n,
    })
}

/// Screens `f` itself.
pub fn screen_function(f: &FunctionSpec, params: &ScreenParams) -> Result<ConvexityVerdict, Error> {
    check_alpha_m_ga(|u| f.eval(u), (f.domain_lo, f.domain_hi), params)
}

/// Screens `|f′|^q`, the hypothesis of the fractional bounds.
pub fn screen_derivative_power(f: &FunctionSpec, q: f64, params: &ScreenParams) -> Result<ConvexityVerdict, Error> {
    if !(q >= 1.0) {
        return Err(Error::Params(format!("q must be >= 1, got {q}")));
    }
    check_alpha_m_ga(
        |u| Ok(f.eval_deriv(u)?.abs().powf(q)),
        (f.domain_lo, f.domain_hi),
        params,
    )
}

/// What a hypothesis asks to be (α,m)-GA-convex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScreenTarget {
    /// `f` itself
    Function,
    /// `|f′|^q`
    DerivativePower,
}

/// A convexity hypothesis on `[lo, hi]`, independent of grid settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub target: ScreenTarget,
    pub alpha: f64,
    pub m: f64,
    pub q: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Hypothesis {
    /// Exact identity of the hypothesis, usable as a cache key.
    pub fn key(&self) -> (ScreenTarget, [u64; 5]) {
        (
            self.target,
            [self.alpha, self.m, self.q, self.lo, self.hi].map(f64::to_bits),
        )
    }

    pub fn screen(&self, f: &FunctionSpec, n: usize, tol: f64) -> Result<ConvexityVerdict, Error> {
        let params = ScreenParams { n, tol, ..ScreenParams::new(self.alpha, self.m, self.lo, self.hi) };
        match self.target {
            ScreenTarget::Function => screen_function(f, &params),
            ScreenTarget::DerivativePower => screen_derivative_power(f, self.q, &params),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::catalog;

    fn constant(c: f64) -> impl Fn(f64) -> Result<f64, ExprError> + Sync {
        move |_| Ok(c)
    }

    const ANY: (f64, f64) = (1e-300, f64::INFINITY);

    #[test]
    fn constant_with_m_one_is_exactly_certified() {
        for &alpha in &[0.1, 0.5, 1.0] {
            let v = check_alpha_m_ga(constant(2.5), ANY, &ScreenParams::new(alpha, 1.0, 0.5, 4.0)).unwrap();
            assert!(v.certified);
            assert_eq!(v.worst_violation, 0.0);
            assert!(v.witness.is_none());
        }
    }

    #[test]
    fn constant_fails_for_m_below_one() {
        let v = check_alpha_m_ga(constant(1.0), ANY, &ScreenParams::new(1.0, 0.5, 0.9, 1.1)).unwrap();
        assert!(!v.certified);
        assert!((v.worst_violation - 0.5).abs() < 1e-12);
        let w = v.witness.unwrap();
        assert_eq!(w.t, 0.0);
    }

    #[test]
    fn square_is_ga_convex() {
        let p = ScreenParams { n: 64, ..ScreenParams::new(1.0, 1.0, 0.5, 2.0) };
        let v = check_alpha_m_ga(|u| Ok(u * u), ANY, &p).unwrap();
        assert!(v.certified);
        assert_eq!(v.grid_density, 64);
    }

    #[test]
    fn powers_are_ga_convex() {
        for &c in &[-1.0, 0.5, 1.0, 2.0, 3.0] {
            let v = check_alpha_m_ga(move |u: f64| Ok(u.powf(c)), ANY, &ScreenParams::new(1.0, 1.0, 0.5, 4.0)).unwrap();
            assert!(v.certified, "u^{c}");
        }
    }

    #[test]
    fn non_convex_function_is_refuted() {
        // sqrt(ln u) style concave-in-log function
        let v = check_alpha_m_ga(|u: f64| Ok(-(u.ln() * u.ln())), ANY, &ScreenParams::new(1.0, 1.0, 0.5, 4.0)).unwrap();
        assert!(!v.certified);
        assert!(v.worst_violation > 0.0);
        assert!(v.witness.is_some());
    }

    #[test]
    fn hull_must_fit_domain() {
        // y^m drops below lo when y > 1 and m < 1
        let f = FunctionSpec::parse("sq", "u^2", 1.2, 3.0).unwrap();
        let p = ScreenParams::new(1.0, 0.5, 1.5, 2.0);
        assert_eq!(evaluation_hull(1.5, 2.0, 0.5).0, 1.5f64.sqrt());
        assert!(screen_function(&f, &p).is_ok());
        let p = ScreenParams::new(1.0, 0.2, 1.5, 2.0);
        assert!(matches!(screen_function(&f, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn parameter_validation() {
        let base = ScreenParams::new(1.0, 1.0, 0.5, 2.0);
        for bad in [
            ScreenParams { alpha: 0.0, ..base },
            ScreenParams { m: 1.5, ..base },
            ScreenParams { lo: 2.0, ..base },
            ScreenParams { n: 4, ..base },
        ] {
            assert!(matches!(check_alpha_m_ga(constant(1.0), ANY, &bad), Err(Error::Params(_))));
        }
    }

    #[test]
    fn catalog_hints_certify() {
        for f in catalog::default_catalog() {
            let (lo, hi) = (f.domain_lo.max(0.5), f.domain_hi.min(4.0));
            for h in &f.convexity_hints {
                let p = ScreenParams::new(h.alpha, h.m, lo, hi);
                assert!(screen_derivative_power(&f, h.q, &p).unwrap().certified, "{} {h:?}", f.name);
            }
        }
    }

    #[test]
    fn log_derivative_fails_for_small_m() {
        // |(ln u)′|^q = u^-q is not (1, 0.5)-GA-convex on [1, 4]
        let p = ScreenParams::new(1.0, 0.5, 1.0, 4.0);
        let v = screen_derivative_power(&catalog::ln(), 2.0, &p).unwrap();
        assert!(!v.certified);
    }
}
