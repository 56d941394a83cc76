//! Built-in test functions with hand-coded derivatives.

use super::function::{ConvexityHint, FunctionSpec, ScalarFn};

fn ga_hints() -> Vec<ConvexityHint> {
    // |f′|^q is a power of u (or exp of a multiple of u) for every entry,
    // and all of those are GA-convex
    [1.0, 2.0, 3.0]
        .iter()
        .map(|&q| ConvexityHint { alpha: 1.0, m: 1.0, q })
        .collect()
}

fn build(name: &str, f: fn(f64) -> f64, df: fn(f64) -> f64, lo: f64, hi: f64) -> FunctionSpec {
    FunctionSpec::new(name, ScalarFn::native(f), ScalarFn::native(df), lo, hi)
        .expect("catalog domains are valid")
        .with_hints(ga_hints())
}

pub fn identity() -> FunctionSpec {
    build("u", |u| u, |_| 1.0, f64::MIN_POSITIVE, f64::INFINITY)
}

pub fn square() -> FunctionSpec {
    build("u^2", |u| u * u, |u| 2.0 * u, f64::MIN_POSITIVE, f64::INFINITY)
}

pub fn cube() -> FunctionSpec {
    build("u^3", |u| u * u * u, |u| 3.0 * u * u, f64::MIN_POSITIVE, f64::INFINITY)
}

pub fn ln() -> FunctionSpec {
    build("ln(u)", f64::ln, |u| 1.0 / u, f64::MIN_POSITIVE, f64::INFINITY)
}

/// `exp(u/4)`, restricted to `[0.5, 2]`.
pub fn exp_quarter() -> FunctionSpec {
    build("exp(u/4)", |u| (u / 4.0).exp(), |u| (u / 4.0).exp() / 4.0, 0.5, 2.0)
}

pub fn reciprocal() -> FunctionSpec {
    build("u^-1", |u| 1.0 / u, |u| -1.0 / (u * u), f64::MIN_POSITIVE, f64::INFINITY)
}

/// The constant function `c`. Its derivative vanishes, so `|f′|^q ≡ 0`
/// which is (α,m)-GA-convex for every α, m.
pub fn constant(c: f64) -> FunctionSpec {
    let mut f = FunctionSpec::new(
        format!("const({c})"),
        ScalarFn::native(move |_| c),
        ScalarFn::native(|_| 0.0),
        f64::MIN_POSITIVE,
        f64::INFINITY,
    )
    .expect("valid domain");
    f.convexity_hints = ga_hints();
    f
}

/// The standard catalog used by default sweeps.
pub fn default_catalog() -> Vec<FunctionSpec> {
    vec![identity(), square(), cube(), ln(), exp_quarter(), reciprocal()]
}

/// Looks a function up by its catalog name. `const(c)` is accepted for any
/// literal `c`.
pub fn lookup(name: &str) -> Option<FunctionSpec> {
    let name = name.trim();
    if let Some(inner) = name.strip_prefix("const(").and_then(|s| s.strip_suffix(')')) {
        return inner.trim().parse::<f64>().ok().map(constant);
    }
    default_catalog().into_iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_finite_differences() {
        for f in default_catalog() {
            for &u in &[0.6, 1.0, 1.7] {
                let h = 1e-6;
                let fd = (f.eval(u + h).unwrap() - f.eval(u - h).unwrap()) / (2.0 * h);
                let d = f.eval_deriv(u).unwrap();
                assert!((fd - d).abs() < 1e-7 * d.abs().max(1.0), "{} at {u}", f.name);
            }
        }
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(lookup("u^2").unwrap().name, "u^2");
        assert_eq!(lookup("const(2.5)").unwrap().eval(3.0).unwrap(), 2.5);
        assert!(lookup("nope").is_none());
        assert!(lookup("exp(u/4)").unwrap().eval(3.0).is_err());
    }
}
