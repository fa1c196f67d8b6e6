mod commands;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use commands::{BoundArgs, CheckArgs, CurveArgs, SimulateArgs, ThresholdArgs, XorsatArgs};

/// Rate-distortion bounds for sparse-graph codes, and simulations of
/// sampled LDGM codes.
///
/// Rates are in bits per source bit, distortions are normalized Hamming
/// distortions in [0, 1/2], and XORSAT clause density is alpha = n/m
/// (equations per variable). Exit status: 0 success, 1 failed check or
/// runtime failure, 2 usage error.
#[derive(Debug, Parser)]
#[command(name = "ldgm", version, after_help = UNITS)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

const UNITS: &str = "Units: rates R in bits per source bit; distortion D is the normalized \
Hamming distortion in [0, 1/2]; clause density alpha = n/m (equations per variable). \
Ranges are written min:max:count.";

#[derive(Debug, Subcommand)]
enum Command {
    /// Upper bound on the rate (bits) of an LDGM or compound LDGM/LDPC
    /// ensemble at one normalized distortion D.
    #[command(after_help = UNITS)]
    Bound(BoundArgs),
    /// Bound curves over a distortion grid, with the Shannon curve
    /// R = 1 - h(D) in bits.
    #[command(after_help = UNITS)]
    Curve(CurveArgs),
    /// Lower bound alpha*(c) on the random c-XORSAT threshold, as a clause
    /// density alpha = n/m.
    #[command(after_help = UNITS)]
    Threshold(ThresholdArgs),
    /// Monte Carlo minimum distortion of sampled codes by exhaustive
    /// encoding.
    #[command(after_help = UNITS)]
    Simulate(SimulateArgs),
    /// Empirical satisfiability of random c-XORSAT over a grid of clause
    /// densities alpha = n/m.
    #[command(after_help = UNITS)]
    Xorsat(XorsatArgs),
    /// Runs the exact and Monte Carlo oracle checks; exits 1 if any fails.
    #[command(after_help = UNITS)]
    Check(CheckArgs),
}

/// How a command failed, and so which exit status it gets.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<ldgm_core::Error> for Failure {
    fn from(e: ldgm_core::Error) -> Self {
        use ldgm_core::Error as E;
        match e {
            E::Domain { .. }
            | E::InvalidParameter(_)
            | E::Config(_)
            | E::Parse { .. }
            | E::BudgetExceeded { .. }
            | E::LengthMismatch { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

/// Collapses clap's multi-line report into one diagnostic line.
fn one_line(err: &clap::Error) -> String {
    let rendered = err.render().to_string();
    let lines: Vec<&str> = rendered
        .lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .filter(|l| !l.is_empty())
        .collect();
    lines.join(" ")
}

/// Everything one invocation produces; `main` only forwards it.
#[derive(Debug)]
pub struct Execution {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Execution {
    fn new(code: u8, stdout: String, stderr: String) -> Self {
        Execution { code, stdout, stderr }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Execution::new(0, e.render().to_string(), String::new())
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Execution::new(2, String::new(), e.render().to_string())
                }
                _ => Execution::new(2, String::new(), format!("{}\n", one_line(&e))),
            };
        }
    };

    let result = match &cli.command {
        Command::Bound(args) => commands::bound(args, cli.format),
        Command::Curve(args) => commands::curve(args, cli.format),
        Command::Threshold(args) => commands::threshold(args, cli.format),
        Command::Simulate(args) => commands::simulate(args, cli.format),
        Command::Xorsat(args) => commands::xorsat(args, cli.format),
        Command::Check(args) => commands::check(args, cli.format),
    };
    match result {
        Ok(out) => Execution::new(u8::from(out.check_failed), out.stdout, out.stderr),
        Err(Failure::Runtime(msg)) => Execution::new(1, String::new(), format!("error: {msg}\n")),
        Err(Failure::Usage(msg)) => Execution::new(2, String::new(), format!("error: {msg}\n")),
    }
}

fn main() -> ExitCode {
    let run = execute(std::env::args_os());
    let mut stdout = io::stdout().lock();
    if let Err(e) = stdout.write_all(run.stdout.as_bytes()).and_then(|()| stdout.flush()) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    eprint!("{}", run.stderr);
    ExitCode::from(run.code)
}
