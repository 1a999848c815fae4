//! `dg2`: verification suites, moduli classification and functional data
//! for invariant instantons on 3-Sasakian 7-manifolds.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use dg2_core::functional::{
    critical_points_numeric, functional_direct, functional_transgression, grid_export, hessian_at,
    moduli_scan, parse_u_range, scan_csv, FloatModel, Grid,
};
use dg2_core::instanton::{
    classify_deformed, classify_g2, verify_solution_set, ConnectionAnsatz, Equation,
};
use dg2_core::models::{solve_nearly_parallel, Epsilon, QMatrix};
use dg2_core::scalars::{parse_rational, rational_fraction};
use dg2_core::verify::{run_suite, PresetName};

#[derive(Parser)]
#[command(name = "dg2", version, about)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run exact verification suites and print a JSON report.
    Verify(VerifyArgs),
    /// Solve for the nearly parallel G2-structures in the family.
    #[command(allow_negative_numbers = true)]
    NearlyParallel {
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Option<Epsilon>,
    },
    /// Classify invariant instantons at t^2 = u.
    Moduli(ModuliArgs),
    /// Evaluate the Chern-Simons type functional.
    Functional(FunctionalArgs),
    /// Branch radii over a range of u, as CSV.
    #[command(allow_negative_numbers = true)]
    Scan {
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Epsilon,
        #[arg(long, default_value_t = 0)]
        k: i64,
        /// `a:b:n`, endpoints as rationals or decimals.
        #[arg(long, allow_hyphen_values = true)]
        u_range: String,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    preset: Option<String>,
    #[arg(long)]
    all: bool,
    /// Nine rationals in row-major order for the hypersymplectic suite.
    #[arg(long, num_args = 9, conflicts_with = "q_file")]
    q: Option<Vec<String>>,
    /// File holding nine whitespace-separated rationals.
    #[arg(long)]
    q_file: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ModuliArgs {
    #[arg(long, value_parser = parse_epsilon)]
    epsilon: Epsilon,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_positive)]
    u: BigRational,
    #[arg(long, default_value_t = 0)]
    k: i64,
    #[arg(long, default_value = "deformed", value_parser = parse_equation)]
    equation: Equation,
    /// Float samples per branch in the verification pass.
    #[arg(long, default_value_t = 50)]
    samples: usize,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
#[command(group = clap::ArgGroup::new("param").args(["t", "u"]))]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["grid", "critical", "hessian", "closed_form"]))]
struct FunctionalArgs {
    #[arg(long, value_parser = parse_epsilon)]
    epsilon: Epsilon,
    #[arg(long, value_parser = parse_positive_float)]
    t: Option<f64>,
    /// Exact t^2; needed for an exact Hessian.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_positive)]
    u: Option<BigRational>,
    /// `x_min:x_max:y_min:y_max:n`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    critical: bool,
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["X", "Y"])]
    hessian: Option<Vec<String>>,
    #[arg(long)]
    closed_form: bool,
    #[arg(long, default_value_t = 200)]
    seeds: usize,
    #[arg(long, default_value_t = 0)]
    rng: u64,
    /// Multiplier applied to grid values.
    #[arg(long, default_value_t = 1.0)]
    volume: f64,
    /// Aloff-Wallach charge for the closed form.
    #[arg(long, default_value_t = 0)]
    k: i64,
}

fn parse_epsilon(s: &str) -> Result<Epsilon, String> {
    let e: i64 = s.trim_start_matches('+').parse().map_err(|_| format!("epsilon must be 1 or -1, got {s}"))?;
    Epsilon::from_i64(e).map_err(|e| e.to_string())
}

fn parse_positive(s: &str) -> Result<BigRational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if r <= BigRational::from_integer(0.into()) {
        return Err(format!("{s} must be positive"));
    }
    Ok(r)
}

fn parse_positive_float(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("{s} must be a positive number")),
    }
}

fn parse_equation(s: &str) -> Result<Equation, String> {
    s.parse::<Equation>().map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<dg2_core::Error> for Failure {
    fn from(e: dg2_core::Error) -> Self {
        Failure::Check(e.to_string())
    }
}

struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn json(value: &Value, ok: bool) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
        text.push('\n');
        Output { text, ok }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_q(args: &VerifyArgs) -> Result<Option<QMatrix>, Failure> {
    let entries: Vec<String> = match (&args.q, &args.q_file) {
        (Some(v), _) => v.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?
            .split_whitespace()
            .map(str::to_string)
            .collect(),
        (None, None) => return Ok(None),
    };
    let values = entries
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(e.to_string()))?;
    QMatrix::from_row_major(&values).map(Some).map_err(|e| usage(e.to_string()))
}

fn cmd_verify(args: &VerifyArgs) -> Result<Output, Failure> {
    let presets = match &args.preset {
        Some(name) => vec![name.parse::<PresetName>().map_err(|e| usage(e.to_string()))?],
        None => PresetName::ALL.to_vec(),
    };
    let q = read_q(args)?;
    let reports: Vec<_> = presets.into_iter().map(|p| run_suite(p, q.clone())).collect();
    let passed = reports.iter().all(|r| r.passed);
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    let failed: usize = reports.iter().flat_map(|r| &r.checks).filter(|c| !c.passed).count();
    let value = json!({
        "passed": passed,
        "checks": total,
        "failed": failed,
        "suites": reports,
    });
    Ok(Output::json(&value, passed))
}

fn cmd_nearly_parallel(epsilon: Option<Epsilon>) -> Result<Output, Failure> {
    let eps: Vec<Epsilon> = epsilon.map_or_else(|| Epsilon::BOTH.to_vec(), |e| vec![e]);
    let mut solutions = Vec::new();
    for e in eps {
        for s in solve_nearly_parallel(e)? {
            solutions.push(json!({
                "epsilon": s.epsilon,
                "u": rational_fraction(&s.u),
                "t": s.t.to_string(),
                "lambda": s.lambda.to_string(),
                "t_float": s.t.to_f64(),
                "lambda_float": s.lambda.to_f64(),
            }));
        }
    }
    Ok(Output::json(&json!({ "solutions": solutions }), true))
}

fn cmd_moduli(args: &ModuliArgs) -> Result<Output, Failure> {
    let set = match args.equation {
        Equation::G2 if args.k != 0 => return Err(usage("--k is only supported with --equation deformed")),
        Equation::G2 => classify_g2(args.epsilon, &args.u)?,
        Equation::Deformed => classify_deformed(args.epsilon, &args.u, args.k)?,
    };
    let report = verify_solution_set(&set, args.samples, 0)?;
    let mut value = serde_json::to_value(&set).expect("solution sets serialize");
    value["verified"] = json!(report.passed());
    if !report.passed() {
        value["verification"] = serde_json::to_value(&report).expect("reports serialize");
    }
    Ok(Output::json(&value, report.passed()))
}

fn cmd_functional(args: &FunctionalArgs) -> Result<Output, Failure> {
    if args.k != 0 && !args.closed_form {
        return Err(usage("--k is only supported with --closed-form"));
    }
    let t = match (&args.t, &args.u) {
        (Some(t), _) => *t,
        (None, Some(u)) => dg2_core::scalars::Scalar::from_rational(u.clone()).to_f64().sqrt(),
        (None, None) if args.closed_form => return closed_form(args),
        (None, None) => return Err(usage("one of --t or --u is required")),
    };
    if let Some(spec) = &args.grid {
        let grid = Grid::parse(spec).map_err(|e| usage(e.to_string()))?;
        let text = grid_export(args.epsilon, t, &grid, args.volume)?;
        return Ok(Output { text, ok: true });
    }
    if args.critical {
        if args.seeds == 0 {
            return Err(usage("--seeds must be at least 1"));
        }
        let report = critical_points_numeric(args.epsilon, t, args.seeds, args.rng)?;
        let ok = report.off_branch == 0;
        return Ok(Output::json(&serde_json::to_value(&report).expect("reports serialize"), ok));
    }
    if let Some(point) = &args.hessian {
        return hessian(args, t, point);
    }
    closed_form(args)
}

fn hessian(args: &FunctionalArgs, t: f64, point: &[String]) -> Result<Output, Failure> {
    let cf = functional_direct(args.epsilon)?;
    if let Some(u) = &args.u {
        let x = parse_rational(&point[0]).map_err(|e| usage(e.to_string()))?;
        let y = parse_rational(&point[1]).map_err(|e| usage(e.to_string()))?;
        let h = hessian_at(&cf, &x, &y, u)?;
        let fr = |r: &BigRational| rational_fraction(r);
        let mut value = json!({
            "epsilon": args.epsilon,
            "u": fr(u),
            "x": fr(&x),
            "y": fr(&y),
            "value": fr(&h.value),
            "gradient": [fr(&h.gradient[0]), fr(&h.gradient[1])],
            "hessian": [[fr(&h.matrix[0][0]), fr(&h.matrix[0][1])], [fr(&h.matrix[1][0]), fr(&h.matrix[1][1])]],
            "eigenvalues": [h.eigenvalues[0].to_string(), h.eigenvalues[1].to_string()],
            "class": h.class,
            "degenerate": h.class == dg2_core::functional::Class::Degenerate,
        });
        if let Some(s) = h.semidefinite {
            value["semidefinite"] = json!(s);
        }
        return Ok(Output::json(&value, true));
    }
    let parse = |s: &String| s.parse::<f64>().map_err(|_| usage(format!("not a number: {s}")));
    let (x, y) = (parse(&point[0])?, parse(&point[1])?);
    let cp = FloatModel::new(&cf, t)?.critical_point(x, y);
    let mut value = serde_json::to_value(&cp).expect("critical points serialize");
    value["epsilon"] = json!(args.epsilon);
    value["t"] = json!(t);
    Ok(Output::json(&value, true))
}

fn closed_form(args: &FunctionalArgs) -> Result<Output, Failure> {
    let (label, cf) = if args.k == 0 {
        ("closed form", functional_direct(args.epsilon)?)
    } else {
        let ansatz = ConnectionAnsatz::symbolic();
        ("extension", functional_transgression(args.epsilon, args.k, &ansatz)?)
    };
    let mut value = json!({
        "epsilon": args.epsilon,
        "k": args.k,
        "label": label,
        "functional": cf.full.to_string(),
        "reduced": cf.poly.to_string(),
    });
    if let Some(u) = &args.u {
        value["u"] = json!(rational_fraction(u));
        value["at_u"] = json!(cf.at_u(u)?.to_string());
    }
    Ok(Output::json(&value, true))
}

fn cmd_scan(epsilon: Epsilon, k: i64, range: &str) -> Result<Output, Failure> {
    let us = parse_u_range(range).map_err(|e| usage(e.to_string()))?;
    let rows = moduli_scan(epsilon, k, &us)?;
    Ok(Output {
        text: scan_csv(&rows),
        ok: true,
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::NearlyParallel { epsilon } => cmd_nearly_parallel(*epsilon),
        Command::Moduli(args) => cmd_moduli(args),
        Command::Functional(args) => cmd_functional(args),
        Command::Scan { epsilon, k, u_range } => cmd_scan(*epsilon, *k, u_range),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out.text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{}", out.text),
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
