mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use cevian::constants::{constants_table, theta, DEFAULT_CF_DEPTH};
use cevian::optimize::{corner_search, maximize_slice, DEFAULT_RESTARTS};
use cevian::ratios::{audit_bound, theorem2_value, RatioBreakdown};
use cevian::{run_suite_with, BarycentricPoint, Error, Schedule, Suite, TrialPlan};
use clap::{Args, Parser, Subcommand};

use crate::render::{render, Field, Format, Record};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_CONVERGENCE: u8 = 4;

/// Largest dimension the randomized commands accept.
const MAX_SAMPLED_DIM: usize = 12;

/// Cevian simplex volume ratios, extremal constants and verification suites.
#[derive(Debug, Parser)]
#[command(name = "cevian", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Corner and cevian volume ratios for one interior point.
    Ratio(RatioArgs),
    /// Table of θ_n, f(θ_n) and the metallic means.
    Constants(ConstantsArgs),
    /// Run a seeded verification suite.
    Verify(VerifyArgs),
    /// Maximize the corner ratio numerically and compare with θ_n.
    Optimize(OptimizeArgs),
    /// Compare the printed general bound with the directly computed maximum.
    AuditBounds(AuditArgs),
}

#[derive(Debug, Args)]
struct RatioArgs {
    /// Dimension of the simplex.
    #[arg(long)]
    n: usize,
    /// Comma-separated barycentric weights (n + 1 of them).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    lambda: Vec<f64>,
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    /// Continued-fraction depth.
    #[arg(long, default_value_t = DEFAULT_CF_DEPTH)]
    depth: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance; defaults to the suite's own.
    #[arg(long)]
    tol: Option<f64>,
    /// Run trials on the current thread only.
    #[arg(long)]
    serial: bool,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run restarts on the current thread only.
    #[arg(long)]
    serial: bool,
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[arg(long, default_value_t = 10)]
    n_max: usize,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A command failure mapped onto the exit-code contract.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConvergenceFailure(_) => EXIT_CONVERGENCE,
            Error::InvalidPlan(_) | Error::UnsupportedDimension(_) | Error::NonPositiveDepth => {
                EXIT_USAGE
            }
            _ => EXIT_DOMAIN,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

struct Output {
    records: Vec<Record>,
    table: bool,
    exit: u8,
    /// Extra lines for text output only.
    notes: Vec<String>,
}

impl Output {
    fn single(record: Record) -> Self {
        Self {
            records: vec![record],
            table: false,
            exit: 0,
            notes: Vec::new(),
        }
    }

    fn table(records: Vec<Record>) -> Self {
        Self {
            records,
            table: true,
            exit: 0,
            notes: Vec::new(),
        }
    }
}

fn check_dim(n: usize, max: usize) -> Result<(), Failure> {
    if (2..=max).contains(&n) {
        Ok(())
    } else {
        Err(Failure::usage(format!("--n must be in 2..={max}, got {n}")))
    }
}

fn cmd_ratio(args: &RatioArgs) -> Result<Output, Failure> {
    check_dim(args.n, 1_000)?;
    if args.lambda.len() != args.n + 1 {
        return Err(Failure::usage(format!(
            "--lambda needs {} entries for n = {}, got {}",
            args.n + 1,
            args.n,
            args.lambda.len()
        )));
    }
    if args.lambda.iter().any(|l| !l.is_finite()) {
        return Err(Failure::usage("--lambda entries must be finite numbers"));
    }
    if let Some(bad) = args.lambda.iter().find(|&&l| l <= 0.0) {
        return Err(Failure::domain(format!(
            "point is not interior: weight {bad} is not positive"
        )));
    }
    let sum: f64 = args.lambda.iter().sum();
    let mut notes = Vec::new();
    if (sum - 1.0).abs() > 1e-9 {
        eprintln!("warning: weights sum to {sum}; renormalized");
        notes.push(format!("renormalized from sum {sum}"));
    }
    let m = BarycentricPoint::new(args.lambda.clone())?;
    let b = RatioBreakdown::new(&m)?;
    let last = b.corner_ratios[args.n];
    let record = vec![
        ("n", Field::Int(args.n as u64)),
        ("lambda", Field::List(m.weights().to_vec())),
        ("corner_ratios", Field::List(b.corner_ratios.clone())),
        ("cevian_ratio", Field::Num(b.cevian_ratio)),
        ("theorem1_bound", Field::Num(b.theorem1_bound)),
        ("theorem1_slack", Field::Num(b.theorem1_bound - b.cevian_ratio)),
        ("theorem2_value", Field::Num(b.theorem2_value)),
        ("theorem2_slack", Field::Num(b.theorem2_value - last)),
    ];
    let mut out = Output::single(record);
    out.notes = notes;
    Ok(out)
}

fn cmd_constants(args: &ConstantsArgs) -> Result<Output, Failure> {
    if args.n_min < 2 || args.n_max < args.n_min || args.n_max > 1_000_000 {
        return Err(Failure::usage(format!(
            "need 2 <= n-min <= n-max <= 1000000, got {}..{}",
            args.n_min, args.n_max
        )));
    }
    if !(1..=100_000).contains(&args.depth) {
        return Err(Failure::usage("--depth must be in 1..=100000"));
    }
    let rows = constants_table(args.n_min, args.n_max, args.depth)?
        .into_iter()
        .map(|r| {
            vec![
                ("n", Field::Int(r.n as u64)),
                ("theta", Field::Num(r.theta)),
                ("theta_cf", Field::Num(r.theta_cf)),
                ("theta_hyp", Field::Num(r.theta_hyp)),
                ("f_theta", Field::Num(r.f_theta)),
                ("log_f_theta", Field::Num(r.log_f_theta)),
                ("paper_eq3_value", Field::Num(r.paper_eq3_value)),
                ("metallic", Field::Num(r.metallic)),
                ("metallic_cf", Field::Num(r.metallic_cf)),
                ("metallic_hyp", Field::Num(r.metallic_hyp)),
            ]
        })
        .collect();
    Ok(Output::table(rows))
}

fn schedule(serial: bool) -> Schedule {
    if serial {
        Schedule::Serial
    } else {
        Schedule::Parallel
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<Output, Failure> {
    check_dim(args.n, MAX_SAMPLED_DIM)?;
    if !(1..=100_000_000).contains(&args.trials) {
        return Err(Failure::usage("--trials must be in 1..=100000000"));
    }
    let mut plan = TrialPlan::new(args.suite, args.n, args.trials, args.seed);
    if let Some(tol) = args.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::usage(format!("--tol must be positive, got {tol}")));
        }
        plan = plan.with_tol(tol);
    }
    plan.validate()?;
    let report = run_suite_with(&plan, schedule(args.serial))?;
    let violations = serde_json::to_value(&report.violations)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let record = vec![
        ("suite", Field::Str(plan.suite.name().into())),
        ("n", Field::Int(plan.n as u64)),
        ("trials", Field::Int(plan.trials)),
        ("seed", Field::Int(plan.seed)),
        ("tol", Field::Num(plan.tol)),
        ("passed", Field::Bool(report.passed)),
        ("worst_margin", Field::Num(report.worst_margin)),
        ("max_ratio_observed", Field::Num(report.max_ratio_observed)),
        ("bound", Field::Num(report.bound)),
        ("violations", Field::Json(violations)),
    ];
    let mut out = Output::single(record);
    out.exit = if report.passed { 0 } else { EXIT_VIOLATION };
    out.notes.push(format!("elapsed {:.3}s", report.elapsed.as_secs_f64()));
    Ok(out)
}

fn cmd_optimize(args: &OptimizeArgs) -> Result<Output, Failure> {
    check_dim(args.n, 20)?;
    if !(1..=4096).contains(&args.restarts) {
        return Err(Failure::usage("--restarts must be in 1..=4096"));
    }
    if !(args.tol > 0.0 && args.tol <= 1e-2) {
        return Err(Failure::usage("--tol must be in (0, 1e-2]"));
    }
    let n = args.n;
    let t = theta(n)?;
    let best = theorem2_value(n)?.value;
    let slice = maximize_slice(n, args.tol)?;
    let (corner, _) = corner_search(n, args.restarts, args.tol, args.seed, schedule(args.serial))?;

    let w = corner.argmax.weights();
    let max_deviation = w[..n]
        .iter()
        .map(|x| (x - t).abs())
        .chain(std::iter::once((w[n] - (1.0 - n as f64 * t)).abs()))
        .fold(0.0, f64::max);
    let record = vec![
        ("n", Field::Int(n as u64)),
        ("restarts", Field::Int(args.restarts as u64)),
        ("seed", Field::Int(args.seed)),
        ("tol", Field::Num(args.tol)),
        ("theta", Field::Num(t)),
        ("theorem2_value", Field::Num(best)),
        ("argmax_x", Field::Num(slice.argmax)),
        ("slice_value", Field::Num(slice.value)),
        ("slice_deviation", Field::Num((slice.argmax - t).abs())),
        ("slice_iterations", Field::Int(slice.iterations as u64)),
        ("slice_residual", Field::Num(slice.first_order_residual)),
        ("lambda_star", Field::List(w.to_vec())),
        ("simplex_value", Field::Num(corner.value)),
        ("simplex_max_deviation", Field::Num(max_deviation)),
        ("simplex_value_deviation", Field::Num((corner.value - best).abs())),
        ("simplex_iterations", Field::Int(corner.iterations as u64)),
        ("simplex_residual", Field::Num(corner.first_order_residual)),
        ("distinct_optima", Field::Int(corner.stationary_points.len() as u64)),
    ];
    Ok(Output::single(record))
}

fn cmd_audit(args: &AuditArgs) -> Result<Output, Failure> {
    if !(2..=1_000).contains(&args.n_max) {
        return Err(Failure::usage("--n-max must be in 2..=1000"));
    }
    let rows = (2..=args.n_max)
        .map(|n| {
            let a = audit_bound(n)?;
            Ok(vec![
                ("n", Field::Int(n as u64)),
                ("direct_f_theta", Field::Num(a.direct_value)),
                ("paper_eq3_value", Field::Num(a.paper_value)),
                ("ratio", Field::Num(a.ratio)),
                ("direct_times_power", Field::Num(a.direct_times_power())),
                ("flagged", Field::Bool((a.ratio - 1.0).abs() > 1e-9)),
            ])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Output::table(rows))
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let out = match &cli.command {
        Command::Ratio(a) => cmd_ratio(a)?,
        Command::Constants(a) => cmd_constants(a)?,
        Command::Verify(a) => cmd_verify(a)?,
        Command::Optimize(a) => cmd_optimize(a)?,
        Command::AuditBounds(a) => cmd_audit(a)?,
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    render(&mut lock, cli.format, &out.records, out.table)?;
    if cli.format == Format::Text {
        for note in &out.notes {
            writeln!(lock, "# {note}")?;
        }
    }
    Ok(out.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
