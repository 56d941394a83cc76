use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use gafrac::constants::{self, ConstantTag, InequalityParams};
use gafrac::convexity::{Hypothesis, ScreenTarget, DEFAULT_GRID_N, DEFAULT_TOL};
use gafrac::harness::{emit_plotdata, emit_report, run_sweep, Axis, ReportFormat, SweepConfig};
use gafrac::{FunctionSpec, QuadratureConfig};

#[derive(Parser)]
#[command(name = "gafrac", version, about = "Numerical checks of Hadamard fractional integral inequalities")]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    /// screen |f′|^q
    Derivative,
    /// screen f itself
    Function,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write its report
    Verify {
        /// Sweep configuration (.toml or .json)
        #[arg(long)]
        config: PathBuf,
        /// Report path [default: the config's output path, else report.<format>]
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Worker threads [default: all cores]
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write min/median slack per statement against this parameter
        #[arg(long, requires = "plot_out")]
        plot_axis: Option<String>,
        #[arg(long, requires = "plot_axis")]
        plot_out: Option<PathBuf>,
    },
    /// Screen an expression for (α,m)-GA-convexity on [lo, hi]
    CheckFn {
        /// Expression in `u`, e.g. "u^2 + ln(u)"
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long, value_enum, default_value_t = Target::Derivative)]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_GRID_N)]
        grid_n: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Print one bound constant by closed form and by quadrature
    Constants {
        /// C0..C4, R0..R4, T1, T2, V1..V4
        #[arg(long, default_value = "R0")]
        name: String,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        lambda: f64,
        /// Hölder exponent; q is derived from it
        #[arg(long, conflicts_with = "q")]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 4.0)]
        b: f64,
        /// [default: √(ab)]
        #[arg(long)]
        x: Option<f64>,
    },
}

fn verify(
    config: PathBuf,
    out: Option<PathBuf>,
    format: Option<Format>,
    jobs: Option<usize>,
    plot: Option<(String, PathBuf)>,
) -> Result<i32> {
    let cfg = SweepConfig::load(&config)?;
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    let format: ReportFormat = format
        .map(Into::into)
        .or_else(|| out.as_deref().and_then(ReportFormat::from_path))
        .or_else(|| cfg.output.as_ref().and_then(|o| o.format.or_else(|| ReportFormat::from_path(&o.path))))
        .unwrap_or(ReportFormat::Json);
    let out = out
        .or_else(|| cfg.output.as_ref().map(|o| o.path.clone()))
        .unwrap_or_else(|| PathBuf::from(match format {
            ReportFormat::Json => "report.json",
            ReportFormat::Csv => "report.csv",
        }));

    let report = run_sweep(&cfg)?;
    emit_report(&report, format, &out)?;
    if let Some((axis, path)) = plot {
        let axis: Axis = axis.parse()?;
        emit_plotdata(&report, axis, &path)?;
    }

    println!("{:<28} {:>8} {:>9} {:>9} {:>8} {:>14}", "statement", "holds", "violated", "skipped", "numeric", "min slack");
    for (name, s) in &report.summary {
        let slack = s.min_slack.map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"));
        println!(
            "{name:<28} {:>8} {:>9} {:>9} {:>8} {slack:>14}",
            s.holds, s.violated, s.skipped_convexity, s.numeric_fail
        );
    }
    if report.skipped_params > 0 {
        println!("{} parameter points outside a function's domain were skipped", report.skipped_params);
    }
    println!("report written to {}", out.display());
    Ok(report.exit_code())
}

#[allow(clippy::too_many_arguments)]
fn check_fn(expr: &str, alpha: f64, m: f64, q: f64, lo: f64, hi: f64, target: Target, grid_n: usize, tol: f64) -> Result<i32> {
    let f = FunctionSpec::parse(expr, expr, f64::MIN_POSITIVE, f64::INFINITY)?;
    let target = match target {
        Target::Derivative => ScreenTarget::DerivativePower,
        Target::Function => ScreenTarget::Function,
    };
    let h = Hypothesis { target, alpha, m, q, lo, hi };
    let v = h.screen(&f, grid_n, tol)?;
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(if v.certified { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn print_constant(
    name: &str,
    theta: f64,
    lambda: f64,
    p: Option<f64>,
    q: Option<f64>,
    alpha: f64,
    m: f64,
    a: f64,
    b: f64,
    x: Option<f64>,
) -> Result<i32> {
    let tag: ConstantTag = name.parse()?;
    let q = match (p, q) {
        (Some(p), _) if p > 1.0 => p / (p - 1.0),
        (Some(p), _) => bail!("p must be > 1, got {p}"),
        (None, Some(q)) => q,
        (None, None) => 1.0,
    };
    let x = x.unwrap_or((a * b).sqrt());
    let params = InequalityParams::new(a, b, x, theta, lambda, alpha, m, q);
    params.validate()?;
    let cfg = QuadratureConfig { rel_tol: 1e-13, abs_tol: 1e-15, max_subdivisions: 4000 };

    println!("{tag} at theta = {theta}, lambda = {lambda}, alpha = {alpha}, m = {m}, q = {q}, p = {}, a = {a}, b = {b}, x = {x}",
        params.p.map_or_else(|| "-".to_string(), |p| p.to_string()));
    let quad = constants::quadrature(tag, &params, &cfg)?;
    match constants::closed_form(tag, &params)? {
        Some(closed) => {
            println!("  closed_form  {closed:.17e}");
            println!("  quadrature   {quad:.17e}");
            println!("  difference   {:.3e}", (closed - quad).abs());
        }
        None => {
            println!("  closed_form  (none; evaluated by quadrature only)");
            println!("  quadrature   {quad:.17e}");
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify { config, out, format, jobs, plot_axis, plot_out } => {
            verify(config, out, format, jobs, plot_axis.zip(plot_out))
        }
        Command::CheckFn { expr, alpha, m, q, lo, hi, target, grid_n, tol } => {
            check_fn(&expr, alpha, m, q, lo, hi, target, grid_n, tol)
        }
        Command::Constants { name, theta, lambda, p, q, alpha, m, a, b, x } => {
            print_constant(&name, theta, lambda, p, q, alpha, m, a, b, x)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
