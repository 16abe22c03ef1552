//! `hurwitz`: evaluate ζ(s,a), Laurent coefficients and the S_n sums from the
//! command line.

mod checks;
mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::{Format, Report, Status};

/// Default precision is read from this variable when `--digits` is absent.
pub const DIGITS_ENV: &str = "HURWITZ_DIGITS";

#[derive(Parser, Debug)]
#[command(name = "hurwitz", version, about = "Configurable-precision Hurwitz zeta evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Requested decimal digits.
    #[arg(long, env = DIGITS_ENV, default_value_t = 30)]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate φ(s,a) = (s−1)ζ(s,a) and ζ(s,a).
    Eval(EvalArgs),
    /// Taylor coefficients of (s−1)ζ(s,a) about s0.
    Laurent(LaurentArgs),
    /// Run built-in consistency checks.
    Check(CheckArgs),
    /// Tabulate the alternating sums S_n(s,a).
    Sn(SnArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Basic integral for Re(s) > 0, continued integral otherwise.
    Auto,
    Integral,
    Series,
    Continued,
    ShiftedIntegral,
    ShiftedSeries,
    Oracle,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// RE or RE,IM.
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    #[arg(long)]
    pub a: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Integration-by-parts order for `--method continued`.
    #[arg(long)]
    pub k: Option<i32>,
    /// Upper limit on the planned series length.
    #[arg(long)]
    pub max_terms: Option<u64>,
    /// Number of S_n values the series methods actually compute.
    #[arg(long)]
    pub work_terms: Option<u64>,
    /// Tolerance target; defaults to 10^-digits.
    #[arg(long)]
    pub target: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct LaurentArgs {
    /// RE or RE,IM.
    #[arg(long, allow_hyphen_values = true)]
    pub s0: String,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub order: u32,
    /// Emit coefficients of (s−1)^(n+1), i.e. the index shifted by one.
    #[arg(long)]
    pub berndt_normalization: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Sums,
    Agreement,
    All,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rows {
    /// Every row up to 1000, log-spaced beyond.
    Auto,
    All,
    /// 1..10, then 1, 2, 5 per decade and n-max.
    Log,
}

#[derive(Args, Debug)]
pub struct SnArgs {
    #[arg(long)]
    pub n_max: u64,
    /// RE or RE,IM.
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    #[arg(long)]
    pub a: String,
    /// Add the large-n estimate and the ratio S_n/estimate.
    #[arg(long)]
    pub with_asymptotic: bool,
    #[arg(long, value_enum, default_value_t = Rows::Auto)]
    pub rows: Rows,
    #[command(flatten)]
    pub common: Common,
}

fn run(cli: Cli) -> (Report, Format) {
    match cli.command {
        Command::Eval(a) => {
            let f = a.common.format;
            (commands::eval(&a), f)
        }
        Command::Laurent(a) => {
            let f = a.common.format;
            (commands::laurent(&a), f)
        }
        Command::Check(a) => {
            let f = a.common.format;
            (checks::run(&a), f)
        }
        Command::Sn(a) => {
            let f = a.common.format;
            (commands::sn(&a), f)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(Status::Usage as u8) } else { ExitCode::SUCCESS };
        }
    };
    let (report, format) = run(cli);
    if let Err(e) = report.emit(format) {
        eprintln!("error: {e}");
        return ExitCode::from(Status::Usage as u8);
    }
    ExitCode::from(report.status as u8)
}
