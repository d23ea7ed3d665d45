//! `ruinwalk`: exact gambler's-ruin solvers from the command line.
//!
//! Exit status is 0 on success, 1 when a computation fails and 2 for bad
//! flags or malformed input.

mod bench;
mod output;

use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ruinwalk::exact::{canonical, format_significant, parse_rational, Rational};
use ruinwalk::gr1d::{self, Profile1D, Ruin1DProblem, StepDistribution};
use ruinwalk::gr2d::{self, BoundaryMix, Grid2D, Probs2D, Ruin2DProblem, Side};
use ruinwalk::identify::{identify_constant, IdentifyQuery};
use ruinwalk::mcsim::{self, SimConfig};
use ruinwalk::mirror::{self, ClosedValue, MirrorProblem};
use ruinwalk::Error;

use output::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "ruinwalk", version, about = "Exact solvers for generalized gambler's ruin walks")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Significant digits for decimal output
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    digits: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One-dimensional walk with an arbitrary step table
    Gr1d(Gr1dArgs),
    /// Walk on an M x N rectangle
    Gr2d(Gr2dArgs),
    /// Walk with a mirror step x -> N - x
    #[command(subcommand)]
    Mirror(MirrorCommand),
    /// Recognize decimals (one per line on stdin) as quadratic surds
    Identify(IdentifyArgs),
    /// Monte Carlo estimates
    Simulate(SimulateArgs),
    /// Time competing solvers and write CSV
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Quantity {
    Prob,
    Duration,
    Variance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Dense,
    Reduced,
    Kmet,
}

#[derive(Args, Debug)]
struct Gr1dArgs {
    #[arg(long)]
    n: usize,
    /// Step table as JSON, e.g. '[[-1,"1/2"],[1,"1/2"]]'
    #[arg(long)]
    table: String,
    #[arg(long, value_enum, default_value = "prob")]
    quantity: Quantity,
    #[arg(long, value_enum, default_value = "reduced")]
    method: Method,
    /// Report only this starting point
    #[arg(long)]
    x: Option<usize>,
}

#[derive(Args, Debug)]
struct Gr2dArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// "pL,pU,pR,pB"; defaults to 1/4 each
    #[arg(long)]
    probs: Option<String>,
    #[arg(long, value_enum, default_value = "prob")]
    quantity: Quantity,
    #[arg(long, value_enum, default_value = "reduced")]
    method: Method,
}

#[derive(Args, Debug)]
struct MirrorWalk {
    #[arg(long)]
    n: usize,
    /// Mirror-step probability
    #[arg(long)]
    p: String,
    /// Left-step probability; defaults to (1 - p) / 2
    #[arg(long)]
    q1: Option<String>,
    /// Right-step probability; defaults to (1 - p) / 2
    #[arg(long)]
    q2: Option<String>,
    #[arg(long)]
    x: Option<usize>,
    /// Evaluate the closed form instead of solving (symmetric walks only)
    #[arg(long)]
    closed: bool,
}

#[derive(Subcommand, Debug)]
enum MirrorCommand {
    /// Probability of reaching N
    Prob(MirrorWalk),
    /// Expected duration
    Duration(MirrorWalk),
    /// Limit of the win probability as N grows
    Limit {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1)]
        x: i64,
        /// Start at N - x instead of x
        #[arg(long)]
        from_top: bool,
    },
    /// Compare the conjectured start-at-1 limit with exact solves under
    /// both readings of its parameters
    Explore {
        #[arg(long)]
        p: String,
        #[arg(long, value_delimiter = ',', default_value = "25,50,100,200")]
        sizes: Vec<usize>,
    },
}

#[derive(Args, Debug)]
struct IdentifyArgs {
    #[arg(long, default_value_t = ruinwalk::identify::DEFAULT_MAX_COEFF)]
    max_coeff: u32,
    #[arg(long, default_value_t = ruinwalk::identify::DEFAULT_MAX_RADICAND)]
    max_radicand: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    #[value(name = "1d")]
    OneD,
    #[value(name = "2d")]
    TwoD,
    Mirror,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    variant: Variant,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    table: Option<String>,
    #[arg(long)]
    probs: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q1: Option<String>,
    #[arg(long)]
    q2: Option<String>,
    #[arg(long)]
    x: i64,
    #[arg(long)]
    y: Option<i64>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,
    #[arg(long, default_value_t = 1)]
    partitions: u32,
}

/// Failure with its exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SingularMatrix { .. } | Error::VerificationFailed { .. } | Error::NotSquare { .. } | Error::MissingAssignment(_) => {
                CliError::Compute(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let report = match &cli.command {
        Command::Gr1d(args) => cmd_gr1d(args, cli.digits)?,
        Command::Gr2d(args) => cmd_gr2d(args, cli.digits)?,
        Command::Mirror(cmd) => cmd_mirror(cmd, cli.digits)?,
        Command::Identify(args) => cmd_identify(args, &mut io::stdin().lock())?,
        Command::Simulate(args) => cmd_simulate(args)?,
        Command::Bench(args) => return bench::cmd_bench(args),
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    report.render(cli.format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn rational_arg(name: &str, text: &str) -> CliResult<Rational> {
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

fn profile_report(quantity: &str, n: usize, profile: &Profile1D, only: Option<usize>, digits: u32) -> CliResult<Report> {
    let points: Vec<usize> = match only {
        Some(x) if x >= 1 && x <= profile.len() => vec![x],
        Some(x) => return Err(CliError::Usage(format!("--x {x} is not in [1, {}]", profile.len()))),
        None => (1..=profile.len()).collect(),
    };
    let mut report = Report::new(&["x", "exact", "decimal"]);
    let mut exact = Vec::new();
    let mut decimal = Vec::new();
    for &x in &points {
        let v = profile.get(x);
        exact.push(canonical(v));
        decimal.push(format_significant(v, digits));
        report.row(vec![x.to_string(), canonical(v), format_significant(v, digits)]);
    }
    report.json.push(json!({ "quantity": quantity, "n": n, "x": points, "values": exact, "decimals": decimal }));
    Ok(report)
}

fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::Prob => "prob",
        Quantity::Duration => "duration",
        Quantity::Variance => "variance",
    }
}

fn cmd_gr1d(args: &Gr1dArgs, digits: u32) -> CliResult<Report> {
    let dist = StepDistribution::from_json(&args.table)?;
    let problem = Ruin1DProblem::new(args.n, dist)?;
    let dense = match args.method {
        Method::Dense => true,
        Method::Reduced => false,
        Method::Kmet => return Err(CliError::Usage("--method kmet applies to gr2d only".into())),
    };
    let profile = match (args.quantity, dense) {
        (Quantity::Prob, true) => gr1d::prob_dense(&problem)?,
        (Quantity::Prob, false) => gr1d::prob_reduced(&problem)?,
        (Quantity::Duration, true) => gr1d::duration_dense(&problem)?,
        (Quantity::Duration, false) => gr1d::duration_reduced(&problem)?,
        (Quantity::Variance, true) => gr1d::variance_dense(&problem)?,
        (Quantity::Variance, false) => gr1d::variance(&problem)?,
    };
    profile_report(quantity_name(args.quantity), args.n, &profile, args.x, digits)
}

fn cmd_gr2d(args: &Gr2dArgs, digits: u32) -> CliResult<Report> {
    let probs = match &args.probs {
        Some(text) => Probs2D::parse(text)?,
        None => Probs2D::equal(),
    };
    let problem = Ruin2DProblem::new(args.m, args.n, probs)?;
    let quantity = quantity_name(args.quantity);
    if args.method == Method::Kmet {
        if args.quantity != Quantity::Duration || args.m != args.n || !problem.probs().is_equal() {
            return Err(CliError::Usage("--method kmet needs --quantity duration, M = N and equal probabilities".into()));
        }
        let grid = gr2d::kmet_grid(args.m, digits)?;
        return Ok(decimal_grid_report(quantity, &grid, digits));
    }
    let dense = args.method == Method::Dense;
    match args.quantity {
        Quantity::Prob => {
            let grid = if dense { gr2d::prob2d_dense(&problem)? } else { gr2d::prob2d_reduced(&problem)? };
            Ok(mix_grid_report(&grid, digits))
        }
        Quantity::Duration => {
            let grid = if dense { gr2d::duration2d_dense(&problem)? } else { gr2d::duration2d_reduced(&problem)? };
            Ok(scalar_grid_report(quantity, &grid, digits))
        }
        Quantity::Variance => {
            let grid = if dense { gr2d::variance2d_dense(&problem)? } else { gr2d::variance2d(&problem)? };
            Ok(scalar_grid_report(quantity, &grid, digits))
        }
    }
}

fn cells<T>(grid: &Grid2D<T>) -> impl Iterator<Item = (usize, usize, &T)> {
    (1..grid.m()).flat_map(move |x| (1..grid.n()).map(move |y| (x, y, grid.get(x, y))))
}

fn scalar_grid_report(quantity: &str, grid: &Grid2D<Rational>, digits: u32) -> Report {
    let mut report = Report::new(&["x", "y", "exact", "decimal"]);
    let mut docs = Vec::new();
    for (x, y, v) in cells(grid) {
        let (e, d) = (canonical(v), format_significant(v, digits));
        docs.push(json!({ "x": x, "y": y, "value": e, "decimal": d }));
        report.row(vec![x.to_string(), y.to_string(), e, d]);
    }
    report.json.push(json!({ "quantity": quantity, "m": grid.m(), "n": grid.n(), "cells": docs }));
    report
}

fn decimal_grid_report(quantity: &str, grid: &Grid2D<ruinwalk::precise::Real>, digits: u32) -> Report {
    let mut report = Report::new(&["x", "y", "decimal"]);
    let mut docs = Vec::new();
    for (x, y, v) in cells(grid) {
        let d = v.format(digits);
        docs.push(json!({ "x": x, "y": y, "decimal": d }));
        report.row(vec![x.to_string(), y.to_string(), d]);
    }
    report.json.push(json!({ "quantity": quantity, "m": grid.m(), "n": grid.n(), "cells": docs }));
    report
}

fn mix_grid_report(grid: &Grid2D<BoundaryMix>, digits: u32) -> Report {
    let sides = [("L", Side::L), ("U", Side::U), ("R", Side::R), ("B", Side::B)];
    let mut report = Report::new(&["x", "y", "L", "U", "R", "B"]);
    let mut docs = Vec::new();
    for (x, y, mix) in cells(grid) {
        let mut value = serde_json::Map::new();
        let mut decimal = serde_json::Map::new();
        let mut row = vec![x.to_string(), y.to_string()];
        for (name, side) in sides {
            let c = mix.component(side);
            value.insert(name.into(), Value::String(canonical(c)));
            decimal.insert(name.into(), Value::String(format_significant(c, digits)));
            row.push(canonical(c));
        }
        docs.push(json!({ "x": x, "y": y, "value": value, "decimal": decimal }));
        report.row(row);
    }
    report.json.push(json!({ "quantity": "prob", "m": grid.m(), "n": grid.n(), "cells": docs }));
    report
}

fn mirror_problem(walk: &MirrorWalk) -> CliResult<MirrorProblem> {
    let p = rational_arg("p", &walk.p)?;
    Ok(match (&walk.q1, &walk.q2) {
        (None, None) => MirrorProblem::symmetric(walk.n, p)?,
        (Some(q1), Some(q2)) => MirrorProblem::new(walk.n, rational_arg("q1", q1)?, rational_arg("q2", q2)?, p)?,
        _ => return Err(CliError::Usage("give both --q1 and --q2, or neither".into())),
    })
}

fn cmd_mirror(cmd: &MirrorCommand, digits: u32) -> CliResult<Report> {
    match cmd {
        MirrorCommand::Prob(walk) | MirrorCommand::Duration(walk) => {
            let prob = matches!(cmd, MirrorCommand::Prob(_));
            let problem = mirror_problem(walk)?;
            let quantity = if prob { "prob" } else { "duration" };
            if walk.closed {
                return mirror_closed(&problem, prob, walk.x, digits);
            }
            let profile = if prob { mirror::mirror_prob_solve(&problem)? } else { mirror::mirror_duration_solve(&problem)? };
            profile_report(quantity, walk.n, &profile, walk.x, digits)
        }
        MirrorCommand::Limit { p, x, from_top } => {
            let p = rational_arg("p", p)?;
            let value = if *from_top { mirror::mirror_limit_complement(&p, *x, digits)? } else { mirror::mirror_limit(&p, *x, digits)? };
            let text = value.format(digits);
            let mut report = Report::new(&["p", "x", "from_top", "limit"]);
            report.row(vec![canonical(&p), x.to_string(), from_top.to_string(), text.clone()]);
            report.json.push(json!({ "p": canonical(&p), "x": x, "from_top": from_top, "limit": text }));
            Ok(report)
        }
        MirrorCommand::Explore { p, sizes } => {
            let p = rational_arg("p", p)?;
            if sizes.is_empty() {
                return Err(CliError::Usage("--sizes must list at least one N".into()));
            }
            let ex = mirror::explore_conjecture(&p, sizes, digits)?;
            let conjectured = ex.conjectured.format(digits);
            let mut report = Report::new(&["reading", "n", "value", "gap"]);
            report.row(vec!["conjectured".into(), "-".into(), conjectured.clone(), "-".into()]);
            let mut readings = Vec::new();
            for trace in &ex.traces {
                let mut points = Vec::new();
                for (n, value, gap) in &trace.points {
                    let (v, g) = (value.format(digits), format!("{:.3e}", gap.to_f64()));
                    report.row(vec![trace.reading.name().into(), n.to_string(), v.clone(), g.clone()]);
                    points.push(json!({ "n": n, "value": v, "gap": g }));
                }
                readings.push(json!({ "reading": trace.reading.name(), "points": points }));
            }
            let best = ex.best().map(|r| r.name());
            report.row(vec!["best".into(), "-".into(), best.unwrap_or("-").into(), "-".into()]);
            report.json.push(json!({ "p": canonical(&p), "conjectured": conjectured, "readings": readings, "best": best }));
            Ok(report)
        }
    }
}

fn mirror_closed(problem: &MirrorProblem, prob: bool, only: Option<usize>, digits: u32) -> CliResult<Report> {
    if !problem.is_symmetric() {
        return Err(CliError::Usage("--closed needs q1 = q2".into()));
    }
    let n = problem.n();
    let points: Vec<usize> = match only {
        Some(x) if x >= 1 && x < n => vec![x],
        Some(x) => return Err(CliError::Usage(format!("--x {x} is not in [1, {}]", n - 1))),
        None => (1..n).collect(),
    };
    let mut report = Report::new(&["x", "exact", "decimal"]);
    let mut exact = Vec::new();
    let mut decimal = Vec::new();
    for &x in &points {
        let value = if prob {
            mirror::mirror_prob_closed(n, problem.p(), x as i64, digits)?
        } else {
            ClosedValue::Exact(mirror::mirror_duration_closed(n, problem.p(), x as i64)?)
        };
        let e = value.exact().map(canonical);
        let d = value.format(digits);
        report.row(vec![x.to_string(), e.clone().unwrap_or_else(|| "-".into()), d.clone()]);
        exact.push(e);
        decimal.push(d);
    }
    let quantity = if prob { "prob" } else { "duration" };
    report.json.push(json!({ "quantity": quantity, "n": n, "x": points, "values": exact, "decimals": decimal }));
    Ok(report)
}

fn cmd_identify(args: &IdentifyArgs, input: &mut dyn BufRead) -> CliResult<Report> {
    let mut report = Report::new(&["input", "pretty", "a", "b", "c", "n"]);
    for line in input.lines() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let query = IdentifyQuery::with_bounds(text, args.max_coeff, args.max_radicand)?;
        match identify_constant(&query) {
            Some(s) => {
                let mut doc = s.to_json();
                doc["input"] = json!(text);
                report.json.push(doc);
                report.row(vec![text.into(), s.pretty(), s.a().to_string(), s.b().to_string(), s.c().to_string(), s.n().to_string()]);
            }
            None => {
                report.json.push(json!({ "input": text, "pretty": null }));
                report.row(vec![text.into(), "no match".into(), "-".into(), "-".into(), "-".into(), "-".into()]);
            }
        }
    }
    Ok(report)
}

fn cmd_simulate(args: &SimulateArgs) -> CliResult<Report> {
    let config = SimConfig::new(args.trials, args.seed).with_max_steps(args.max_steps).with_partitions(args.partitions);
    let need =
        |flag: &Option<String>, name: &str| flag.clone().ok_or_else(|| CliError::Usage(format!("--{name} is required for this variant")));
    let sim = match args.variant {
        Variant::OneD => {
            let dist = StepDistribution::from_json(&need(&args.table, "table")?)?;
            mcsim::simulate1d(&Ruin1DProblem::new(args.n, dist)?, args.x, &config)?
        }
        Variant::TwoD => {
            let m = args.m.ok_or_else(|| CliError::Usage("--m is required for the 2d variant".into()))?;
            let y = args.y.ok_or_else(|| CliError::Usage("--y is required for the 2d variant".into()))?;
            let probs = match &args.probs {
                Some(text) => Probs2D::parse(text)?,
                None => Probs2D::equal(),
            };
            mcsim::simulate2d(&Ruin2DProblem::new(m, args.n, probs)?, args.x, y, &config)?
        }
        Variant::Mirror => {
            let walk = MirrorWalk { n: args.n, p: need(&args.p, "p")?, q1: args.q1.clone(), q2: args.q2.clone(), x: None, closed: false };
            mcsim::simulate_mirror(&mirror_problem(&walk)?, args.x, &config)?
        }
    };
    let value = serde_json::to_value(&sim).map_err(|e| CliError::Compute(e.to_string()))?;
    let mut report = Report::new(&["field", "value"]);
    if let Value::Object(map) = &value {
        for (k, v) in map {
            report.row(vec![k.clone(), v.to_string()]);
        }
    }
    report.json.push(value);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr1d_json(method: Method) -> Value {
        let args = Gr1dArgs { n: 5, table: r#"[[-2,"1/2"],[1,"1/4"],[2,"1/4"]]"#.into(), quantity: Quantity::Prob, method, x: None };
        cmd_gr1d(&args, 10).unwrap().json.remove(0)
    }

    #[test]
    fn dense_and_reduced_render_identically() {
        assert_eq!(gr1d_json(Method::Dense).to_string(), gr1d_json(Method::Reduced).to_string());
        assert_eq!(gr1d_json(Method::Reduced)["values"], json!(["1/5", "13/45", "23/45", "29/45"]));
    }

    #[test]
    fn identify_reads_lines() {
        let args = IdentifyArgs { max_coeff: 100, max_radicand: 50 };
        let mut input = io::Cursor::new("0.4142135624\n\n3.14159265358979\n");
        let report = cmd_identify(&args, &mut input).unwrap();
        assert_eq!(report.json.len(), 2);
        assert_eq!(report.json[0]["pretty"], "(-1+1*sqrt(2))/1");
        assert!(report.json[1]["pretty"].is_null());
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::InvalidTable("x".into())).code(), 2);
        assert_eq!(CliError::from(Error::SingularMatrix { column: 0 }).code(), 1);
    }
}
