//! `hilfer`: check existence hypotheses, solve, and self-test.

mod problem;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use hilfer_core::bvp::{solve_picard, SolveDiagnostics};
use hilfer_core::hypcheck::applicability_report;
use hilfer_core::identities::run_battery;
use hilfer_core::{HypothesisReport, PicardOptions, ReportOptions, SolveResult};
use serde::Serialize;
use thiserror::Error;

use problem::{LoadedProblem, SolverFile};

const EXIT_INPUT: u8 = 1;
const EXIT_NO_THEOREM: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;
const EXIT_IDENTITY: u8 = 4;

const DEFAULT_NODES: usize = 2048;
const DEFAULT_GRADING: f64 = 2.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] hilfer_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "hilfer", version, about = "Hilfer fractional boundary value problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the existence constants and report which theorems apply.
    Check {
        problem: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        report: ReportArgs,
        #[arg(long)]
        json: bool,
    },
    /// Solve by Picard iteration and write the solution as CSV.
    Solve {
        problem: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = "solution.csv")]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the operator identity battery.
    Identities {
        /// Multiplies every tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        #[arg(long)]
        json: bool,
    },
    /// Check and solve the built-in worked example.
    Example {
        #[command(flatten)]
        grid: GridArgs,
        /// Also write the solution CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Number of panels [default: 2048]
    #[arg(long)]
    nodes: Option<usize>,
    /// Grading exponent q >= 1 [default: 2]
    #[arg(long)]
    grading: Option<f64>,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Step-norm tolerance [default: 1e-10]
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap [default: 200]
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Let sampled estimates of N, zeta, L and eta certify theorems.
    #[arg(long)]
    trust_estimates: bool,
}

fn grid_for(p: &LoadedProblem, args: &GridArgs) -> Result<std::sync::Arc<hilfer_core::Grid>, CliError> {
    let n = args.nodes.or(p.solver.nodes).unwrap_or(DEFAULT_NODES);
    let q = args.grading.or(p.solver.grading).unwrap_or(DEFAULT_GRADING);
    Ok(p.spec.grid(n, q)?)
}

fn picard_options(file: &SolverFile, args: &SolverArgs) -> PicardOptions {
    let defaults = PicardOptions::default();
    PicardOptions {
        tol: args.tol.or(file.tol).unwrap_or(defaults.tol),
        max_iter: args.max_iter.or(file.max_iter).unwrap_or(defaults.max_iter),
        ..defaults
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn report_exit(report: &HypothesisReport) -> u8 {
    if report.any_applies() {
        0
    } else {
        EXIT_NO_THEOREM
    }
}

fn cmd_check(path: &Path, grid: &GridArgs, opts: &ReportArgs, json: bool) -> Result<u8, CliError> {
    let start = Instant::now();
    let p = problem::load(path)?;
    let grid = grid_for(&p, grid)?;
    let options = ReportOptions { trust_estimates: opts.trust_estimates, ..Default::default() };
    let report = applicability_report(&p.spec, &grid, options)?;
    if json {
        print_json(&report)?;
    } else {
        println!("{report}");
        println!("# elapsed_ms={:.3}", start.elapsed().as_secs_f64() * 1e3);
    }
    if !report.any_applies() {
        eprintln!("no existence theorem applies");
    }
    Ok(report_exit(&report))
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    #[serde(flatten)]
    diagnostics: SolveDiagnostics,
    nodes: usize,
    grading: f64,
    output: &'a Path,
}

fn write_solution(res: &SolveResult, out: &Path) -> Result<(), CliError> {
    let file = File::create(out).map_err(|e| CliError::Input(format!("cannot create {}: {e}", out.display())))?;
    let mut w = BufWriter::new(file);
    res.solution.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn print_key_values(d: &SolveDiagnostics, out: Option<&Path>) {
    println!("iterations={}", d.iterations);
    println!("converged={}", d.converged);
    println!("diverging={}", d.diverging);
    let opt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |v| format!("{v:e}"));
    println!("volterra_residual={}", opt(d.volterra_residual));
    println!("boundary_residual={}", opt(d.boundary_residual));
    println!("solution_norm={:e}", d.solution_norm);
    for (k, s) in d.step_norms.iter().enumerate() {
        println!("step_norm.{}={s:e}", k + 1);
    }
    if let Some(out) = out {
        println!("output={}", out.display());
    }
}

fn convergence_exit(res: &SolveResult) -> u8 {
    if res.converged {
        return 0;
    }
    if res.diverging {
        eprintln!(
            "not converged: diverging, step norm grew for 3 consecutive iterations (last {:e})",
            res.step_norms.last().copied().unwrap_or(f64::NAN)
        );
    } else {
        eprintln!("not converged: iteration cap reached after {} iterations", res.iterations);
    }
    EXIT_NOT_CONVERGED
}

fn cmd_solve(path: &Path, grid: &GridArgs, solver: &SolverArgs, out: &Path, json: bool) -> Result<u8, CliError> {
    let start = Instant::now();
    let p = problem::load(path)?;
    let grid = grid_for(&p, grid)?;
    let res = solve_picard(&p.spec, &grid, picard_options(&p.solver, solver))?;
    write_solution(&res, out)?;
    let diagnostics = res.diagnostics();
    if json {
        print_json(&SolveOutput {
            diagnostics,
            nodes: grid.n_panels(),
            grading: grid.grading(),
            output: out,
        })?;
    } else {
        print_key_values(&diagnostics, Some(out));
        println!("# elapsed_ms={:.3}", start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(convergence_exit(&res))
}

fn cmd_identities(tol_scale: f64, json: bool) -> Result<u8, CliError> {
    let start = Instant::now();
    let outcomes = run_battery(tol_scale)?;
    if json {
        print_json(&outcomes)?;
    } else {
        for o in &outcomes {
            println!(
                "[{}] {}: measured={:e} tolerance={:e}",
                if o.passed { "PASS" } else { "FAIL" },
                o.name,
                o.measured,
                o.tolerance
            );
        }
        println!("# elapsed_ms={:.3}", start.elapsed().as_secs_f64() * 1e3);
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect();
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("failing identities: {}", failed.join("; "));
        Ok(EXIT_IDENTITY)
    }
}

/// Constants as printed alongside the worked example, to two digits.
const PUBLISHED: [(&str, f64); 3] = [("G", 0.19), ("W", 0.14), ("K_con", 0.05)];

fn cmd_example(grid: &GridArgs, out: Option<&Path>) -> Result<u8, CliError> {
    let start = Instant::now();
    let p = problem::worked_example();
    let grid = grid_for(&p, grid)?;
    let report = applicability_report(&p.spec, &grid, ReportOptions::default())?;
    println!("{report}");
    println!();
    println!("{:<8} {:>12} {:>10}", "constant", "computed", "published");
    let computed = [report.g, report.w.unwrap_or(f64::NAN), report.k_con];
    for ((name, published), value) in PUBLISHED.iter().zip(computed) {
        println!("{name:<8} {value:>12.6} {published:>10.2}");
    }
    println!();
    let res = solve_picard(&p.spec, &grid, picard_options(&p.solver, &SolverArgs { tol: None, max_iter: None }))?;
    if let Some(out) = out {
        write_solution(&res, out)?;
    }
    print_key_values(&res.diagnostics(), out);
    println!("# elapsed_ms={:.3}", start.elapsed().as_secs_f64() * 1e3);
    let code = report_exit(&report);
    Ok(if code != 0 { code } else { convergence_exit(&res) })
}

/// Sizes the global pool from `HILFER_THREADS`; 0 or unset keeps rayon's default.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HILFER_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("HILFER_THREADS must be a non-negative integer, got {raw:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(format!("cannot size thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Check { problem, grid, report, json } => cmd_check(&problem, &grid, &report, json),
        Command::Solve { problem, grid, solver, out, json } => cmd_solve(&problem, &grid, &solver, &out, json),
        Command::Identities { tol_scale, json } => cmd_identities(tol_scale, json),
        Command::Example { grid, out } => cmd_example(&grid, out.as_deref()),
    }
}

fn main() -> ExitCode {
    // clap's own usage exit code (2) would collide with "no theorem applies"
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
