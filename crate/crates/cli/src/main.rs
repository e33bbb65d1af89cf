use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ddelay::format::{bounds_json, qtable_json, trajectory_json, trig_csv, trig_json, write_trajectory_csv};
use ddelay::{
    parse_problem, simulate, verify_with, AnyProblem, ClosedFormSolver, DeterminingTable, HistorySign,
    Mode, NormKind, NumberStyle, ProblemSpec, Scalar, TrigEvaluator, VerifyOptions,
};
use serde_json::Value;

/// Closed-form solver and verifier for second-order delayed discrete systems
/// `Δ²y(t) + A y(t) + B y(t-m) = f(t)`.
#[derive(Parser, Debug)]
#[command(name = "ddelay", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the closed-form solution on [-m, T]
    Solve(SolveArgs),
    /// Iterate the recurrence directly on [-m, T]
    Simulate(CommonArgs),
    /// Compare closed form and recurrence, run identity and bound checks
    Verify(VerifyArgs),
    /// Dump the determining matrices Q(t; s) for t <= tmax
    Qtable(QtableArgs),
    /// Dump the delayed sine and cosine on [tmin, tmax]
    Trig(TrigArgs),
    /// Norm majorants l_s, l_c and the exponential bound
    Bounds(BoundsArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Problem file (JSON)
    #[arg(short, long)]
    input: PathBuf,

    /// Write here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,

    /// Override the file's arithmetic mode
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,

    /// Override the file's horizon T
    #[arg(long)]
    horizon: Option<usize>,

    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Render entries as fixed-point decimals with N fractional digits
    #[arg(long, value_name = "N")]
    decimal_digits: Option<usize>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    history_sign: SignArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    history_sign: SignArg,

    #[arg(long, value_enum, default_value_t = NormArg::Induced1)]
    norm: NormArg,

    /// Relative tolerance in f64 mode (rational mode is always exact)
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
}

#[derive(Args, Debug)]
struct QtableArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[arg(long, default_value_t = 4)]
    tmax: usize,
}

#[derive(Args, Debug)]
struct TrigArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    tmin: i64,

    /// Defaults to the horizon
    #[arg(long)]
    tmax: Option<i64>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[arg(long, value_enum, default_value_t = NormArg::Induced1)]
    norm: NormArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Rational,
    F64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Minus,
    /// Add the history sum instead of subtracting it; disagrees with the recurrence from t = 2
    Plus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    Induced1,
    InducedInf,
}

impl From<SignArg> for HistorySign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Minus => HistorySign::Subtract,
            SignArg::Plus => HistorySign::Add,
        }
    }
}

impl From<NormArg> for NormKind {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Induced1 => NormKind::Induced1,
            NormArg::InducedInf => NormKind::InducedInf,
        }
    }
}

/// Failure with its exit status: 1 for a failed verification, 2 otherwise.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<ddelay::Error> for Failure {
    fn from(e: ddelay::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(format!("i/o: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn load(args: &CommonArgs) -> Result<AnyProblem, Failure> {
    let mut problem = parse_problem(&args.input)?;
    if let Some(h) = args.horizon {
        problem = problem.with_horizon(h)?;
    }
    if let Some(mode) = args.mode {
        problem = problem.into_mode(match mode {
            ModeArg::Rational => Mode::Rational,
            ModeArg::F64 => Mode::F64,
        })?;
    }
    Ok(problem)
}

fn style(args: &CommonArgs) -> NumberStyle {
    args.decimal_digits.map_or(NumberStyle::Exact, NumberStyle::Decimal)
}

fn open_output(args: &CommonArgs) -> Result<Box<dyn Write>, Failure> {
    Ok(match &args.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json(args: &CommonArgs, value: &Value) -> Outcome {
    let mut out = open_output(args)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Failure::usage(format!("json: {e}")))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn emit_text(args: &CommonArgs, text: &str) -> Outcome {
    let mut out = open_output(args)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn json_only(args: &CommonArgs, what: &str) -> Outcome {
    match args.format {
        Some(Format::Csv) => Err(Failure::usage(format!("{what} output is JSON only"))),
        _ => Ok(()),
    }
}

fn emit_trajectory<S: Scalar>(args: &CommonArgs, traj: &ddelay::Trajectory<S>) -> Outcome {
    match args.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = open_output(args)?;
            write_trajectory_csv(traj, &mut out, style(args))?;
            out.flush()?;
            Ok(())
        }
        Format::Json => emit_json(args, &trajectory_json(traj, style(args))),
    }
}

macro_rules! dispatch {
    ($problem:expr, $p:ident => $body:expr) => {
        match $problem {
            AnyProblem::Rational($p) => $body,
            AnyProblem::F64($p) => $body,
        }
    };
}

fn solve<S: Scalar>(p: &ProblemSpec<S>, args: &SolveArgs) -> Outcome {
    let solver = ClosedFormSolver::with_sign(p, args.history_sign.into())?;
    emit_trajectory(&args.common, &solver.trajectory())
}

fn verify<S: Scalar>(p: &ProblemSpec<S>, args: &VerifyArgs) -> Outcome {
    json_only(&args.common, "verify")?;
    let opts = VerifyOptions {
        sign: args.history_sign.into(),
        norm: args.norm.into(),
        tolerance: args.tolerance,
    };
    let report = verify_with(p, &opts)?;
    emit_json(&args.common, &report.to_json())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure { code: 1, message: "verification failed".into() })
    }
}

fn qtable<S: Scalar>(p: &ProblemSpec<S>, args: &QtableArgs) -> Outcome {
    json_only(&args.common, "qtable")?;
    let mut table = DeterminingTable::new(p.a().clone(), p.b().clone())?;
    emit_json(&args.common, &qtable_json(&mut table, args.tmax))
}

fn trig<S: Scalar>(p: &ProblemSpec<S>, args: &TrigArgs) -> Outcome {
    let tmax = args.tmax.unwrap_or(p.horizon() as i64);
    if tmax < args.tmin {
        return Err(Failure::usage(format!("--tmax {tmax} is below --tmin {}", args.tmin)));
    }
    let mut ev = TrigEvaluator::new(p.a().clone(), p.b().clone(), p.delay())?;
    match args.common.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(&args.common, &trig_json(&mut ev, args.tmin, tmax)),
        Format::Csv => emit_text(&args.common, &trig_csv(&mut ev, args.tmin, tmax, style(&args.common))),
    }
}

fn bounds<S: Scalar>(p: &ProblemSpec<S>, args: &BoundsArgs) -> Outcome {
    json_only(&args.common, "bounds")?;
    emit_json(&args.common, &bounds_json(p, args.norm.into())?)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Solve(args) => dispatch!(load(&args.common)?, p => solve(&p, &args)),
        Command::Simulate(args) => dispatch!(load(&args)?, p => emit_trajectory(&args, &simulate(&p))),
        Command::Verify(args) => dispatch!(load(&args.common)?, p => verify(&p, &args)),
        Command::Qtable(args) => dispatch!(load(&args.common)?, p => qtable(&p, &args)),
        Command::Trig(args) => dispatch!(load(&args.common)?, p => trig(&p, &args)),
        Command::Bounds(args) => dispatch!(load(&args.common)?, p => bounds(&p, &args)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ddelay: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
