use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use padic_rank_one::padic_core::Q;
use padic_rank_one::rational::parse_rat;
use padic_rank_one::series::DEFAULT_TAIL_FRACTION;

mod commands;
mod encode;
mod error;
mod job;

use commands::{LtOp, Tuning, WittOp};
use error::CliError;
use job::{parse_job, Overrides};

/// Rank-one p-adic differential equations: solvability, irregularity,
/// exponentials and Witt vector arithmetic from JSON job files.
#[derive(Parser, Debug)]
#[command(name = "rankone", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Job file; standard input when absent or "-".
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Report file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// p-adic digits of reported precision.
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// Series truncation degree.
    #[arg(long, global = true)]
    trunc: Option<i64>,
    /// Tower level of the working ring.
    #[arg(long, global = true)]
    level: Option<u32>,
    /// Lower bound for the Witt length used by the negative-part criterion.
    #[arg(long = "override-M", global = true)]
    override_m: Option<u32>,
    /// Fraction of the window used as tail in growth analysis, e.g. 3/4.
    #[arg(long, global = true)]
    tail_window: Option<String>,
    /// Print `key: value` lines instead of JSON.
    #[arg(long, global = true)]
    summary: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solvability verdict with block data and irregularity.
    Solvable,
    /// Irregularity of a solvable operator.
    Irregularity,
    /// Co-monomial decomposition of a Witt vector of Laurent polynomials.
    Decompose,
    /// Isomorphism-class key.
    Classify,
    /// Radius estimate along a ray.
    Radius,
    /// Coefficients of the Artin-Hasse exponential.
    AhExp,
    /// π-exponential of a Witt vector.
    PiExp,
    /// Value at 1 of the θ function.
    ThetaEval,
    /// Witt vector arithmetic.
    Witt {
        #[command(subcommand)]
        op: WittCmd,
    },
    /// Lubin-Tate series utilities.
    Lt {
        #[command(subcommand)]
        op: LtCmd,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum WittCmd {
    Add,
    Mul,
    Ghost,
    Unghost,
    Frob,
    Versch,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum LtCmd {
    Validate,
    GroupLaw,
    Bracket,
    Torsion,
    Iso,
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(text)
}

fn tail_window(s: &Option<String>) -> Result<Q, CliError> {
    let Some(s) = s else {
        return Ok(Q::new(DEFAULT_TAIL_FRACTION.0, DEFAULT_TAIL_FRACTION.1));
    };
    let q = parse_rat(s).map_err(|e| CliError::validation("--tail-window", e.to_string()))?;
    let (n, d) = (i64::try_from(q.numer()), i64::try_from(q.denom()));
    match (n, d) {
        (Ok(n), Ok(d)) if n > 0 && n <= d => Ok(Q::new(n, d)),
        _ => Err(CliError::validation("--tail-window", "must lie in (0, 1]")),
    }
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    let ov = Overrides { precision: cli.prec, truncation: cli.trunc, level: cli.level };
    let job = parse_job(&read_input(&cli.input)?, &ov)?;
    let tuning = Tuning { override_m: cli.override_m, tail_window: tail_window(&cli.tail_window)? };
    match cli.command {
        Command::Solvable => commands::solvable(&job, &tuning),
        Command::Irregularity => commands::irregularity(&job, &tuning),
        Command::Decompose => commands::decompose_cmd(&job),
        Command::Classify => commands::classify_cmd(&job, &tuning),
        Command::Radius => commands::radius(&job),
        Command::AhExp => commands::ah_exp(&job),
        Command::PiExp => commands::pi_exp(&job),
        Command::ThetaEval => commands::theta_eval(&job, &tuning),
        Command::Witt { op } => commands::witt(
            &job,
            match op {
                WittCmd::Add => WittOp::Add,
                WittCmd::Mul => WittOp::Mul,
                WittCmd::Ghost => WittOp::Ghost,
                WittCmd::Unghost => WittOp::Unghost,
                WittCmd::Frob => WittOp::Frob,
                WittCmd::Versch => WittOp::Versch,
            },
        ),
        Command::Lt { op } => commands::lt(
            &job,
            match op {
                LtCmd::Validate => LtOp::Validate,
                LtCmd::GroupLaw => LtOp::GroupLaw,
                LtCmd::Bracket => LtOp::Bracket,
                LtCmd::Torsion => LtOp::Torsion,
                LtCmd::Iso => LtOp::Iso,
            },
        ),
    }
}

fn emit(cli: &Cli, report: &Value) -> Result<(), CliError> {
    let text = if cli.summary {
        encode::summary(report)
    } else {
        let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
        s.push('\n');
        s
    };
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|r| emit(&cli, &r)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
