//! Command-line front end. [`main_with`] holds all logic so it can be driven
//! from tests with captured output.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::dsl::{self, ParseError, ParseErrorKind, RunOptions, RunReport};
use crate::scalar::{self, fmt_short, ScalarParams};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Range used for the map plot written by `scalar --plot`.
pub const SCALAR_PLOT_RANGE: (f64, f64) = (-3.0, 3.0);

#[derive(Debug, Parser)]
#[command(
    name = "semiostat",
    version,
    about = "Quotient dynamics of meaning: scenarios, law checks and the scalar model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every directive of a scenario file and print the report.
    Run {
        file: PathBuf,
        /// Directory for CSV/SVG artifacts.
        #[arg(long, env = "SEMIOSTAT_OUT")]
        out: Option<PathBuf>,
    },
    /// Parse a scenario and run its law checks only.
    Check { file: PathBuf },
    /// Iterate the projected scalar map from one starting point.
    Scalar {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        x0: f64,
        /// Projection grid spacing.
        #[arg(long)]
        eps: Option<f64>,
        /// Write the trajectory CSV and the map plot (CSV and SVG).
        #[arg(long)]
        plot: bool,
        #[arg(long, env = "SEMIOSTAT_OUT")]
        out: Option<PathBuf>,
    },
    /// Locate and classify the fixed points of the scalar map.
    FixedPoints {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        /// `LO,HI`
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: (f64, f64),
        #[arg(long)]
        plot: bool,
        #[arg(long, env = "SEMIOSTAT_OUT")]
        out: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected LO,HI, found `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{}`: {e}", t.trim()));
    Ok((num(lo)?, num(hi)?))
}

/// A failure with its exit code and `error[CODE]` tag.
struct Failure {
    code: &'static str,
    exit: i32,
    message: String,
}

impl Failure {
    fn new(code: &'static str, exit: i32, message: impl Into<String>) -> Self {
        Failure { code, exit, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => Failure::new("E_IO", EXIT_USAGE, e.to_string()),
            Error::InvalidParam { .. } | Error::NonFinite { .. } => Failure::new("E_PARAM", EXIT_USAGE, e.to_string()),
            _ => Failure::new("E_RUN", EXIT_FAILURE, e.to_string()),
        }
    }
}

fn parse_failure(path: &Path, e: ParseError) -> Failure {
    let code = match e.kind {
        ParseErrorKind::Resolution => "E_RESOLVE",
        _ => "E_PARSE",
    };
    Failure::new(code, EXIT_USAGE, format!("{}:{e}", path.display()))
}

fn load(path: &Path) -> Result<dsl::Scenario, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::from(Error::io(path, e)))?;
    dsl::parse_scenario(&text).map_err(|e| parse_failure(path, e))
}

fn report_failures(report: &RunReport, code: &'static str) -> Result<(), Failure> {
    let failed: Vec<String> = report
        .runs
        .iter()
        .enumerate()
        .filter(|(_, r)| r.failed)
        .map(|(i, r)| format!("run {} ({}): {}", i + 1, r.directive, r.result))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(code, EXIT_FAILURE, failed.join("; ")))
    }
}

fn params(alpha: f64, beta: f64, eps: Option<f64>) -> Result<ScalarParams, Failure> {
    let p = ScalarParams::new(alpha, beta)?;
    Ok(match eps {
        Some(e) => p.with_epsilon(e)?,
        None => p,
    })
}

fn out_dir(out: Option<PathBuf>) -> PathBuf {
    out.unwrap_or_else(|| PathBuf::from("."))
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::new("E_IO", EXIT_USAGE, format!("stdout: {e}"));
    match cli.command {
        Command::Run { file, out } => {
            let scenario = load(&file)?;
            let report = dsl::run_scenario(&scenario, &RunOptions { out_dir: out })?;
            write!(stdout, "{}", report.text).map_err(io)?;
            report_failures(&report, "E_RUN")
        }
        Command::Check { file } => {
            let scenario = load(&file)?;
            let report = dsl::check_scenario(&scenario)?;
            write!(stdout, "{}", report.text).map_err(io)?;
            report_failures(&report, "E_LAW")
        }
        Command::Scalar { alpha, beta, x0, eps, plot, out } => {
            let p = params(alpha, beta, eps)?;
            let contraction = scalar::contraction_report(&p)?;
            let record = scalar::iterate(&p, x0)?;
            writeln!(
                stdout,
                "alpha {} beta {} x0 {} eps {}",
                fmt_short(alpha),
                fmt_short(beta),
                fmt_short(x0),
                fmt_short(p.epsilon)
            )
            .map_err(io)?;
            writeln!(
                stdout,
                "contraction: bound {} ({}), empirical max |phi'| {}",
                fmt_short(contraction.bound),
                if contraction.is_certified { "certified" } else { "not certified" },
                fmt_short(contraction.empirical_max)
            )
            .map_err(io)?;
            writeln!(stdout, "steps: {}", record.steps()).map_err(io)?;
            let status = match record.status {
                scalar::TrajectoryStatus::Converged { fixed_point, step } => {
                    format!("converged to {} at t={step}", fmt_short(fixed_point))
                }
                other => other.to_string(),
            };
            writeln!(stdout, "status: {status}").map_err(io)?;
            if plot {
                let dir = out_dir(out);
                let path = dir.join("trajectory.csv");
                scalar::emit_trajectory(&record, &path)?;
                let map = scalar::map_plot(&p, SCALAR_PLOT_RANGE.0, SCALAR_PLOT_RANGE.1)?;
                let mut written = vec![path];
                written.extend(scalar::emit_map_plot(&map, &dir, "map", true)?);
                for w in written {
                    writeln!(stdout, "wrote {}", w.display()).map_err(io)?;
                }
            }
            Ok(())
        }
        Command::FixedPoints { alpha, beta, range, plot, out } => {
            let p = params(alpha, beta, None)?;
            let points = scalar::find_fixed_points(&p, range.0, range.1)?;
            writeln!(stdout, "{} fixed point(s) in [{}, {}]", points.len(), fmt_short(range.0), fmt_short(range.1))
                .map_err(io)?;
            for fp in &points {
                writeln!(stdout, "x = {}  phi' = {}  {}", fmt_short(fp.x), fmt_short(fp.derivative), fp.stability)
                    .map_err(io)?;
            }
            if plot {
                let map = scalar::map_plot(&p, range.0, range.1)?;
                for w in scalar::emit_map_plot(&map, &out_dir(out), "map", true)? {
                    writeln!(stdout, "wrote {}", w.display()).map_err(io)?;
                }
            }
            Ok(())
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code: 0 on success, 1 on a failed run or law check, 2 on usage, parse,
/// parameter or I/O errors.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(stderr, "error[E_USAGE]: {first}");
            let _ = write!(stderr, "{}", rendered.lines().skip(1).map(|l| format!("{l}\n")).collect::<String>());
            return EXIT_USAGE;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error[{}]: {}", f.code, f.message);
            f.exit
        }
    }
}
