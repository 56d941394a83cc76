//! The classical (θ = 1, m = 1) midpoint inequalities, coded from scratch
//! so they can cross-check the fractional machinery. Nothing here calls the
//! adaptive integrator or the constants module.

use crate::expr::FunctionSpec;
use crate::Result;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[n - 1 - i] = weights[i];
    }
    (nodes, weights)
}

const PANELS: usize = 64;
const ORDER: usize = 16;

/// Composite Gauss–Legendre on `[lo, hi]`.
fn composite<F: FnMut(f64) -> Result<f64>>(mut g: F, lo: f64, hi: f64) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(ORDER);
    let h = (hi - lo) / PANELS as f64;
    let mut total = 0.0;
    for k in 0..PANELS {
        let c = lo + (k as f64 + 0.5) * h;
        let mut panel = 0.0;
        for (z, w) in nodes.iter().zip(&weights) {
            panel += w * g(c + 0.5 * h * z)?;
        }
        total += 0.5 * h * panel;
    }
    Ok(total)
}

/// `∫₀¹ g(t) dt` through `t = s⁴`, which smooths the `t^α` weights at 0.
fn unit_integral<F: Fn(f64) -> f64>(g: F) -> f64 {
    composite(|s| Ok(4.0 * s * s * s * g(s * s * s * s)), 0.0, 1.0).expect("infallible integrand")
}

/// `|f(√(ab)) − (1/ln(b/a)) ∫_a^b f(u)/u du|`.
pub fn midpoint_lhs(f: &FunctionSpec, a: f64, b: f64) -> Result<f64> {
    // u = e^v turns the log-mean into a plain average over [ln a, ln b]
    let (la, lb) = (a.ln(), b.ln());
    let mean = composite(|v| Ok(f.eval(v.exp())?), la, lb)? / (lb - la);
    Ok((f.eval((a * b).sqrt())? - mean).abs())
}

fn weight(k: u8, t: f64, alpha: f64) -> f64 {
    if k % 2 == 1 {
        t.powf(alpha)
    } else {
        1.0 - t.powf(alpha)
    }
}

/// Half log-width, signed towards `a` (k ≤ 2) or `b` (k ≥ 3).
fn half_log(k: u8, a: f64, b: f64) -> f64 {
    let h = 0.5 * (b / a).ln();
    if k <= 2 {
        h
    } else {
        -h
    }
}

fn endpoint_terms(f: &FunctionSpec, a: f64, b: f64, q: f64, consts: impl Fn(u8) -> f64) -> Result<f64> {
    let dm = f.eval_deriv((a * b).sqrt())?.abs().powf(q);
    let da = f.eval_deriv(a)?.abs().powf(q);
    let db = f.eval_deriv(b)?.abs().powf(q);
    Ok(a * (dm * consts(1) + da * consts(2)).powf(1.0 / q) + b * (dm * consts(3) + db * consts(4)).powf(1.0 / q))
}

/// Power-mean midpoint bound for α-GA-convex `|f′|^q`, `q ≥ 1`:
/// `ln(b/a)·(1/2)^(3−1/q)·{a[..C1, C2..]^(1/q) + b[..C3, C4..]^(1/q)}`.
pub fn midpoint_power_mean_rhs(f: &FunctionSpec, a: f64, b: f64, alpha: f64, q: f64) -> Result<f64> {
    // C_k(√(ab), 1, 0, q, 1, α) = ∫ t·e^(q·h·t)·w(t) dt
    let c = |k: u8| {
        let s = q * half_log(k, a, b);
        unit_integral(|t| t * (s * t).exp() * weight(k, t, alpha))
    };
    Ok((b / a).ln() * 0.5f64.powf(3.0 - 1.0 / q) * endpoint_terms(f, a, b, q, c)?)
}

/// Hölder midpoint bound for α-GA-convex `|f′|^q`, `q > 1`:
/// `(ln(b/a)/4)·((q−1)/(2q−1))^(1−1/q)·{a[..R1, R2..]^(1/q) + b[..R3, R4..]^(1/q)}`.
pub fn midpoint_holder_rhs(f: &FunctionSpec, a: f64, b: f64, alpha: f64, q: f64) -> Result<f64> {
    let r = |k: u8| {
        let s = q * half_log(k, a, b);
        unit_integral(|t| (s * t).exp() * weight(k, t, alpha))
    };
    let lead = ((q - 1.0) / (2.0 * q - 1.0)).powf(1.0 - 1.0 / q);
    Ok((b / a).ln() / 4.0 * lead * endpoint_terms(f, a, b, q, r)?)
}
