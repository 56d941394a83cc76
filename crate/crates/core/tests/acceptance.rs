//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; any failure makes the
//! process exit non-zero.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use gafrac::constants::{self, ConstantTag, InequalityParams};
use gafrac::convexity::{Hypothesis, ScreenTarget, DEFAULT_GRID_N, DEFAULT_TOL};
use gafrac::expr::{self, catalog};
use gafrac::harness::{report_csv, run_sweep, Report, SweepConfig};
use gafrac::ineq::{corollary, hh_chain, hypothesis_interval, remark, Statement, Verdict};
use gafrac::quad::{hadamard_left, hadamard_right};
use gafrac::specfun::{beta, gamma, hyp2f1, hyp2f1_series};
use gafrac::QuadratureConfig;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
}

fn tight() -> QuadratureConfig {
    QuadratureConfig { rel_tol: 1e-12, abs_tol: 1e-15, max_subdivisions: 4000 }
}

fn lemma2_identity() -> Outcome {
    let cfg = SweepConfig { statements: vec![Statement::Lemma2], ..SweepConfig::default() };
    let start = Instant::now();
    let report = run_sweep(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut worst: f64 = 0.0;
    let mut functions = std::collections::BTreeSet::new();
    for r in &report.records {
        // slack is −|lhs_direct − rhs_identity|
        let scaled = r.slack.abs() / r.lhs.abs().max(1.0);
        ensure(r.verdict == Verdict::Holds && scaled <= 1e-7, || format!("{} at {:?}: gap {}", r.function, r.params, r.slack))?;
        worst = worst.max(scaled);
        functions.insert(r.function.clone());
    }
    let n = report.records.len();
    ensure(n >= 2000, || format!("only {n} points"))?;
    ensure(functions.len() == 6, || format!("functions covered: {functions:?}"))?;
    ensure(elapsed <= Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("{n} points, worst scaled gap {worst:.2e}, {:.1}s", elapsed.as_secs_f64()))
}

/// Random in-contract tuples, with λ pinned near 0 and 1 for every fifth pair.
fn random_tuples(n: usize) -> Vec<InequalityParams> {
    let mut rng = StdRng::seed_from_u64(0x5eed_c0de);
    (0..n)
        .map(|i| {
            let a: f64 = rng.gen_range(0.5..2.0);
            let b = a * rng.gen_range(1.2..5.0);
            let x = a * (b / a).powf(rng.gen_range(0.0..=1.0));
            let lambda = match i % 5 {
                0 => 1e-4,
                1 => 1.0 - 1e-4,
                _ => rng.gen_range(0.0..=1.0),
            };
            InequalityParams::new(
                a,
                b,
                x,
                rng.gen_range(0.2..3.0),
                lambda,
                rng.gen_range(0.05..=1.0),
                rng.gen_range(0.1..=1.0),
                rng.gen_range(1.05..4.0),
            )
        })
        .collect()
}

const TUPLES: usize = 600;

fn closed_forms_vs_quadrature() -> Outcome {
    let start = Instant::now();
    let tags = [ConstantTag::C0, ConstantTag::R0, ConstantTag::V1, ConstantTag::V2, ConstantTag::V3, ConstantTag::V4];
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for p in random_tuples(TUPLES) {
        for tag in tags {
            let closed = constants::closed_form(tag, &p)
                .map_err(|e| format!("{tag} at {p:?}: {e}"))?
                .ok_or_else(|| format!("{tag} has no closed form"))?;
            let quad = constants::quadrature(tag, &p, &tight()).map_err(|e| format!("{tag} at {p:?}: {e}"))?;
            let r = rel(closed, quad);
            ensure(r <= 1e-8, || format!("{tag} at {p:?}: closed {closed}, quadrature {quad}, rel {r:.2e}"))?;
            worst = worst.max(r);
            checks += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{TUPLES} tuples, {checks} comparisons, worst rel {worst:.2e}, {:.1}s", elapsed.as_secs_f64()))
}

fn v12_sum_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in random_tuples(TUPLES) {
        let v1 = constants::v12(1, p.theta, p.lambda, p.alpha, p.q).map_err(|e| e.to_string())?;
        let v2 = constants::v12(2, p.theta, p.lambda, p.alpha, p.q).map_err(|e| e.to_string())?;
        let r0 = constants::r0(p.theta, p.lambda, p.q).map_err(|e| e.to_string())?;
        let r = rel(v1 + v2, r0);
        ensure(r <= 1e-9, || format!("at {p:?}: V1 + V2 = {}, R0 = {r0}", v1 + v2))?;
        worst = worst.max(r);
    }
    Ok(format!("{TUPLES} tuples, worst rel {worst:.2e}"))
}

fn hermite_hadamard_chain() -> Outcome {
    let cfg = QuadratureConfig::default();
    let (mut certified, mut ln_points) = (0, 0);
    for f in catalog::default_catalog() {
        for a in [0.5, 1.0, 2.0] {
            for ratio in [1.5, 2.0, 4.0] {
                let b = a * ratio;
                if !f.covers(a, b) {
                    continue;
                }
                let h = Hypothesis { target: ScreenTarget::Function, alpha: 1.0, m: 1.0, q: 1.0, lo: a, hi: b };
                if !h.screen(&f, DEFAULT_GRID_N, DEFAULT_TOL).map_err(|e| e.to_string())?.certified {
                    continue;
                }
                for theta in [0.3, 0.5, 1.0, 2.5] {
                    let c = hh_chain(&f, a, b, theta, &cfg).map_err(|e| e.to_string())?;
                    let tol = 1e-9 * c.left.abs().max(c.right.abs()).max(1.0);
                    ensure(c.left <= c.middle + tol && c.middle <= c.right + tol, || {
                        format!("{} at a = {a}, b = {b}, theta = {theta}: {c:?}", f.name)
                    })?;
                    if f.name == "ln(u)" {
                        ensure((c.right - c.left).abs() <= tol && (c.middle - c.left).abs() <= tol, || {
                            format!("ln chain not tight at a = {a}, b = {b}, theta = {theta}: {c:?}")
                        })?;
                        ln_points += 1;
                    }
                    certified += 1;
                }
            }
        }
    }
    ensure(ln_points > 0, || "ln(u) never certified".into())?;
    Ok(format!("{certified} certified chains, {ln_points} of them equalities for ln(u)"))
}

fn theorems_on_default_sweep(report: &Report) -> Outcome {
    let (mut decided, mut skipped) = (0, 0);
    for r in &report.records {
        ensure(r.verdict != Verdict::Violated, || format!("violated: {r:?}"))?;
        if !matches!(r.statement, Statement::Thm(5..=8)) {
            continue;
        }
        let cv = r.convexity.as_ref().ok_or_else(|| format!("no screening on {r:?}"))?;
        if cv.certified {
            ensure(r.verdict == Verdict::Holds, || format!("certified but {}: {r:?}", r.verdict))?;
            decided += 1;
        } else {
            ensure(r.verdict == Verdict::SkippedConvexity, || format!("uncertified but {}: {r:?}", r.verdict))?;
            skipped += 1;
        }
    }
    ensure(decided > 0, || "no certified theorem records".into())?;
    Ok(format!("{} records, {decided} hold, {skipped} skipped, 0 violated", report.records.len()))
}

fn remark_reductions() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut points = 0;
    let mut worst: f64 = 0.0;
    for f in catalog::default_catalog() {
        for a in [0.5, 1.0, 2.0] {
            for ratio in [1.5, 2.0, 4.0] {
                let b = a * ratio;
                let (lo, hi) = hypothesis_interval(a, b, 1.0);
                if !f.covers(lo, hi) {
                    continue;
                }
                for alpha in [0.25, 0.5, 1.0] {
                    for q in [1.0, 2.0, 3.0] {
                        let base = InequalityParams::new(a, b, (a * b).sqrt(), 1.0, 0.0, alpha, 1.0, q);
                        let mut pairs = vec![(Statement::Midpoint(5), remark::midpoint_power_mean_rhs(&f, a, b, alpha, q))];
                        if q > 1.0 {
                            pairs.push((Statement::Midpoint(6), remark::midpoint_holder_rhs(&f, a, b, alpha, q)));
                        }
                        for (st, independent) in pairs {
                            let independent = independent.map_err(|e| e.to_string())?;
                            let rec = corollary(st, &f, &base, &cfg, 1e-7).map_err(|e| e.to_string())?;
                            let r = rel(rec.rhs, independent);
                            ensure(r <= 1e-9, || {
                                format!("{st} for {} at a = {a}, b = {b}, alpha = {alpha}, q = {q}: {} vs {independent}", f.name, rec.rhs)
                            })?;
                            let lhs = remark::midpoint_lhs(&f, a, b).map_err(|e| e.to_string())?;
                            ensure((rec.lhs - lhs).abs() <= 1e-9 * lhs.abs().max(1.0), || {
                                format!("{st} lhs for {}: {} vs {lhs}", f.name, rec.lhs)
                            })?;
                            worst = worst.max(r);
                            points += 1;
                        }
                    }
                }
            }
        }
    }
    ensure(points >= 100, || format!("only {points} points"))?;
    Ok(format!("{points} points, worst rel {worst:.2e}"))
}

fn special_functions() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    for i in 0..=990 {
        let x = 0.1 + 0.01 * i as f64;
        let (g1, g) = (gamma(x + 1.0).unwrap(), gamma(x).unwrap());
        ensure((g1 - x * g).abs() <= 1e-12 * g1, || format!("gamma recurrence at {x}: {g1} vs {}", x * g))?;
    }
    for _ in 0..500 {
        let (x, y) = (rng.gen_range(1e-3..=5.0), rng.gen_range(1e-3..=5.0));
        let r = rel(beta(x, y).unwrap(), beta(y, x).unwrap());
        ensure(r <= 1e-12, || format!("beta({x}, {y}) asymmetric by {r:.2e}"))?;
    }
    let mut worst: f64 = 0.0;
    for _ in 0..300 {
        let a = rng.gen_range(0.1..3.0);
        let b = rng.gen_range(0.1..3.0);
        let c = b + rng.gen_range(0.1..4.0);
        let z = rng.gen_range(-0.9..=0.9);
        let (euler, series) = (hyp2f1(a, b, c, z).map_err(|e| e.to_string())?, hyp2f1_series(a, b, c, z).map_err(|e| e.to_string())?);
        let r = rel(euler, series);
        ensure(r <= 1e-9, || format!("2F1({a}, {b}; {c}; {z}): integral {euler}, series {series}"))?;
        worst = worst.max(r);
    }
    for k in 1..=9 {
        let z = k as f64 / 10.0;
        let exact = -(1.0 - z).ln() / z;
        let v = hyp2f1(1.0, 1.0, 2.0, z).map_err(|e| e.to_string())?;
        ensure(rel(v, exact) <= 1e-10, || format!("2F1(1, 1; 2; {z}) = {v}, expected {exact}"))?;
    }
    Ok(format!("recurrence on 991 points, 500 beta pairs, 300 2F1 pairs (worst rel {worst:.2e}), log closed form"))
}

fn hadamard_of_one() -> Outcome {
    let one = catalog::constant(1.0);
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for theta in [0.3, 0.5, 1.0, 2.5] {
        for (a, x) in [(1.0f64, 2.0f64), (0.5, 4.0), (1.5, 1.6), (2.0, 20.0)] {
            let exact = (x / a).ln().powf(theta) / gamma(theta + 1.0).unwrap();
            let l = hadamard_left(&one, a, x, theta, &cfg).map_err(|e| e.to_string())?;
            let r = hadamard_right(&one, a, x, theta, &cfg).map_err(|e| e.to_string())?;
            for v in [l, r] {
                ensure(rel(v, exact) <= 1e-10, || format!("theta = {theta}, [{a}, {x}]: {v} vs {exact}"))?;
                worst = worst.max(rel(v, exact));
            }
        }
    }
    Ok(format!("4 orders x 4 intervals x both sides, worst rel {worst:.2e}"))
}

fn determinism(first: &Report) -> Outcome {
    let second = run_sweep(&SweepConfig::default()).map_err(|e| e.to_string())?;
    let (x, y) = (report_csv(first).map_err(|e| e.to_string())?, report_csv(&second).map_err(|e| e.to_string())?);
    ensure(x.as_bytes() == y.as_bytes(), || {
        let line = x.lines().zip(y.lines()).position(|(p, q)| p != q);
        format!("CSV reports differ (first differing line {line:?})")
    })?;
    Ok(format!("{} bytes identical across two sweeps", x.len()))
}

/// Random expression over u, ln, exp, literal powers and the four operators.
fn random_expr(rng: &mut StdRng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..3) {
            0 => format!("{:.3}", rng.gen_range(0.5..3.0)),
            _ => "u".into(),
        };
    }
    let sub = |rng: &mut StdRng| random_expr(rng, depth - 1);
    match rng.gen_range(0..8) {
        0 => format!("({} + {})", sub(rng), sub(rng)),
        1 => format!("({} - {})", sub(rng), sub(rng)),
        2 | 3 => format!("({} * {})", sub(rng), sub(rng)),
        4 => format!("({} / {})", sub(rng), sub(rng)),
        5 => {
            let e = [-2.0, -1.0, -0.5, 0.5, 1.5, 2.0, 3.0][rng.gen_range(0..7)];
            format!("({})^({e})", sub(rng))
        }
        6 => format!("ln({})", sub(rng)),
        _ => format!("exp({} / 4)", sub(rng)),
    }
}

fn expression_derivatives() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20);
    let grid: Vec<f64> = (0..50).map(|i| 0.5 + 2.5 * i as f64 / 49.0).collect();
    let (mut accepted, mut worst) = (Vec::new(), 0.0f64);
    while accepted.len() < 20 {
        let src = random_expr(&mut rng, 3);
        let e = expr::parse(&src).map_err(|err| format!("`{src}` failed to parse: {err}"))?;
        // keep expressions that are finite and moderate over the whole grid
        let ok = grid.iter().all(|&u| {
            let h = 1e-6 * u.abs().max(1.0);
            [u - h, u, u + h].iter().all(|&v| e.eval(v).is_ok_and(|y| y.abs() < 1e6))
        });
        if !ok || !src.contains('u') {
            continue;
        }
        let d = expr::diff(&e);
        for &u in &grid {
            let h = 1e-6 * u.abs().max(1.0);
            let fd = (e.eval(u + h).unwrap() - e.eval(u - h).unwrap()) / (2.0 * h);
            let exact = d.eval(u).map_err(|err| format!("d/du `{src}` at {u}: {err}"))?;
            let scaled = (exact - fd).abs() / exact.abs().max(1.0);
            ensure(scaled <= 1e-5, || format!("`{src}` at u = {u}: symbolic {exact}, finite difference {fd}"))?;
            worst = worst.max(scaled);
        }
        accepted.push(src);
    }
    Ok(format!("20 expressions x 50 points, worst scaled error {worst:.2e}"))
}

fn run(n: usize, name: &str, check: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("PASS  {n:>2} {name}: {detail} [{secs:.1}s]");
            true
        }
        Err(why) => {
            println!("FAIL  {n:>2} {name}: {why} [{secs:.1}s]");
            false
        }
    }
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture or a name filter are accepted and ignored
    let mut ok = true;
    ok &= run(1, "lemma 2 identity on the default grid", lemma2_identity);
    ok &= run(2, "closed-form constants vs quadrature", closed_forms_vs_quadrature);
    ok &= run(3, "V1 + V2 = R0", v12_sum_identity);
    ok &= run(4, "Hermite-Hadamard chain", hermite_hadamard_chain);

    let start = Instant::now();
    let sweep = run_sweep(&SweepConfig::default());
    let sweep_secs = start.elapsed().as_secs_f64();
    let sweep = sweep.as_ref().map_err(|e| e.to_string());
    ok &= run(5, "theorems 5-8 on the default sweep", || {
        theorems_on_default_sweep(sweep.as_ref().map_err(Clone::clone)?).map(|d| format!("{d}, sweep {sweep_secs:.1}s"))
    });
    ok &= run(6, "midpoint remark reductions", remark_reductions);
    ok &= run(7, "special functions", special_functions);
    ok &= run(8, "Hadamard integrals of f = 1", hadamard_of_one);
    ok &= run(9, "sweep determinism", || determinism(sweep.as_ref().map_err(Clone::clone)?));
    ok &= run(10, "expression derivatives vs finite differences", expression_derivatives);

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
