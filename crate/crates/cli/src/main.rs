//! Command-line front end for the `stackstop` solvers.
//!
//! Exit status: 0 on success, 2 on invalid input (including usage errors),
//! 1 on internal failures. `STACKSTOP_THREADS` caps the worker pool.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use stackstop::asymptotic::{AsymptoticModel, MAX_MEMORY};
use stackstop::oracle::simulate;
use stackstop::report::{
    self, render_csv, AsymptoticReport, BoundRow, CsvRow, GameReport, NearOptimalReport, SimulationReport, Table,
    DEFAULT_PRECISION,
};
use stackstop::{solve_game, solve_near_optimal, DecisionRule, StackError};

#[derive(Parser, Debug)]
#[command(name = "stackstop", version, about = "Two-player secretary game with priority: solvers and tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Decimal places for reported numbers (ties round to even).
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Player 1's rule and Player 2's optimal response for N objects.
    Solve {
        #[arg(long)]
        n: u32,
    },
    /// The count-based near-optimal response.
    NearOpt {
        #[arg(long)]
        n: u32,
    },
    /// Large-N thresholds and bounds on Player 2's value.
    Asymptotic {
        /// Only the value bounds.
        #[arg(long)]
        bounds: bool,
        /// Largest memory for the lower bounds.
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
    /// Exhaustive evaluation of Player 2's fixed strategies (N <= 12).
    Oracle {
        #[arg(long)]
        n: u32,
    },
    /// Monte Carlo estimate of both players' success probabilities.
    Simulate {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Strategy::Optimal)]
        strategy: Strategy,
    },
    /// Reproduction tables.
    Tables {
        #[arg(long, value_enum)]
        which: Which,
        /// Number of objects for `q` and `posterior`.
        #[arg(long, default_value_t = 50)]
        n: u32,
        /// Largest memory for `bounds`.
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Strategy {
    Optimal,
    NearOptimal,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    /// Fixed strategies for four objects.
    Table1,
    /// Equilibria for N = 3..10 and 20.
    Equilibria,
    /// Thresholds q_n.
    Q,
    /// Posterior of the second candidate after n*.
    Posterior,
    /// Asymptotic time thresholds t_m.
    ThresholdsAsymptotic,
    /// Memory-k truncation and lower bounds.
    Bounds,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Solver(#[from] StackError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Solver(e) if e.is_validation() => 2,
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn table<R: Serialize + CsvRow>(cli: &Cli, name: &'static str, n: Option<u32>, rows: Vec<R>) -> Result<String> {
    match cli.format {
        Format::Csv => Ok(render_csv(&rows, cli.precision)),
        Format::Json => json(&Table::new(name, n, rows)),
    }
}

fn json_only<T: Serialize>(cli: &Cli, value: &T) -> Result<String> {
    match cli.format {
        Format::Json => json(value),
        Format::Csv => Err(CliError::Usage("this command only supports --format json".into())),
    }
}

fn key_values(pairs: &[(&str, String)]) -> String {
    let mut out = String::from("field,value\n");
    for (k, v) in pairs {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

fn memory(k: u32) -> Result<u32> {
    if k > MAX_MEMORY {
        return Err(CliError::Usage(format!("--k must be at most {MAX_MEMORY}")));
    }
    Ok(k)
}

fn run(cli: &Cli) -> Result<String> {
    let p = cli.precision;
    match &cli.command {
        Command::Solve { n } => {
            let g = solve_game::<f64>(*n)?;
            let r = GameReport::new(&g, p)?;
            match cli.format {
                Format::Json => json(&r),
                Format::Csv => Ok(key_values(&[
                    ("n", r.n.to_string()),
                    ("n_star", r.n_star.to_string()),
                    ("n0", r.n0.to_string()),
                    ("n1", r.n1.map(|v| v.to_string()).unwrap_or_default()),
                    ("u1", report::format_fixed(r.u1, p)),
                    ("u2", report::format_fixed(r.u2, p)),
                    ("v_before_threshold", report::format_fixed(r.v_before_threshold, p)),
                    ("m0", r.m0.to_string()),
                ])),
            }
        }
        Command::NearOpt { n } => {
            let s = solve_near_optimal::<f64>(*n)?;
            let r = NearOptimalReport::new(&s, p)?;
            match cli.format {
                Format::Json => json(&r),
                Format::Csv => {
                    let mut pairs = vec![
                        ("n", r.n.to_string()),
                        ("n_star", r.n_star.to_string()),
                        ("m0", r.m0.to_string()),
                        ("n0_a", r.n0_a.to_string()),
                        ("value", report::format_fixed(r.value, p)),
                        ("v_before_threshold", report::format_fixed(r.v_before_threshold, p)),
                    ];
                    let names: Vec<String> = r.n_m.iter().map(|t| format!("n_{}", t.m)).collect();
                    for (name, t) in names.iter().zip(&r.n_m) {
                        pairs.push((name.as_str(), t.n.to_string()));
                    }
                    Ok(key_values(&pairs))
                }
            }
        }
        Command::Asymptotic { bounds, k } => {
            let model = AsymptoticModel::build(memory(*k)?)?;
            let r = AsymptoticReport::new(&model, p)?;
            if *bounds {
                #[derive(Serialize)]
                struct Bounds<'a> {
                    schema_version: u32,
                    upper_bound: f64,
                    lower_bound: f64,
                    memory_bounds: &'a [BoundRow],
                }
                let b = Bounds {
                    schema_version: r.schema_version,
                    upper_bound: r.upper.t0,
                    lower_bound: r.interval[0],
                    memory_bounds: &r.memory_bounds,
                };
                match cli.format {
                    Format::Json => json(&b),
                    Format::Csv => {
                        let mut s = render_csv(&r.memory_bounds, p);
                        s.push_str(&format!("upper,,{}\n", report::format_fixed(r.upper.t0, p)));
                        Ok(s)
                    }
                }
            } else {
                #[derive(Serialize)]
                struct Full {
                    #[serde(flatten)]
                    report: AsymptoticReport,
                    thresholds: Vec<report::ThresholdRow>,
                }
                json_only(cli, &Full { report: r, thresholds: report::threshold_table(p)? })
            }
        }
        Command::Oracle { n } => table(cli, "oracle", Some(*n), report::fixed_strategy_table(*n, p)?),
        Command::Simulate { n, trials, seed, strategy } => {
            let g = solve_game::<f64>(*n)?;
            let p1 = DecisionRule::p1_threshold(g.n_star);
            let (name, p2) = match strategy {
                Strategy::Optimal => ("optimal", DecisionRule::p2_optimal(&g)),
                Strategy::NearOptimal => ("near-optimal", DecisionRule::p2_near_optimal(&solve_near_optimal(*n)?)),
            };
            let out = simulate(*n, &p1, &p2, *trials, *seed)?;
            let r = SimulationReport::new(*n, name, &out, p)?;
            match cli.format {
                Format::Json => json(&r),
                Format::Csv => Ok(render_csv(std::slice::from_ref(&r), p)),
            }
        }
        Command::Tables { which, n, k } => match which {
            Which::Table1 => table(cli, "table1", Some(4), report::fixed_strategy_table(4, p)?),
            Which::Equilibria => table(cli, "equilibria", None, report::equilibrium_table(p)?),
            Which::Q => {
                let g = solve_game::<f64>(*n)?;
                table(cli, "q", Some(*n), report::q_rows(&g, p))
            }
            Which::Posterior => table(cli, "posterior", Some(*n), report::posterior_table(*n, 4, p)?),
            Which::ThresholdsAsymptotic => table(cli, "thresholds-asymptotic", None, report::threshold_table(p)?),
            Which::Bounds => {
                let model = AsymptoticModel::build(memory(*k)?)?;
                table(cli, "bounds", None, AsymptoticReport::new(&model, p)?.memory_bounds)
            }
        },
    }
}

/// Write via a temporary file in the destination directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

fn thread_limit() -> Result<()> {
    let Ok(raw) = std::env::var("STACKSTOP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("STACKSTOP_THREADS must be a positive integer, got {raw:?}")))?;
    stackstop::parallel::set_thread_limit(threads)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = thread_limit().and_then(|()| run(&cli)).and_then(|text| match &cli.out {
        Some(path) => write_atomic(path, &text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
