//! `frshift` — batch front door over the library: parse a problem file,
//! run the Fredholm/invertibility pipeline, and write reports plus CSV
//! artifacts.
//!
//! Exit codes are a stable contract:
//!   0  success / verdict sufficient
//!   1  input error (parse, certification, size cap, I/O)
//!   2  verdict not sufficient or undecided
//!   3  solve requested on a NONE branch
//!   4  solver non-convergence
//!   5  validation suite failure (first failing check named)

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use frshift::error::Error;
use frshift::export::{write_decay, write_solution, write_symbol_surface};
use frshift::fredholm::{condition_ii, fredholm_verdict, fredholm_verdict_with_oracle, VerdictStatus};
use frshift::mellin::{gaussian_bump, SampledFunction};
use frshift::oplab::DEFAULT_SECTION_CAP;
use frshift::problem::{load_problem, ProblemFile};
use frshift::solver::{check_fo_conditions, neumann_solve, Branch, BinomialOperator};
use frshift::so_expr::Endpoint;
use frshift::validate::run_validation;
use frshift::Result;

use num_complex::Complex64;

#[derive(Parser)]
#[command(
    name = "frshift",
    about = "Fredholm analysis of singular integral operators with slowly oscillating shifts on the half-line",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory for reports and CSV artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Seed for the randomized checks of `validate`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Configuration override `key=value` (repeatable); same keys as the
    /// problem file, e.g. `--config grid.n=2048`.
    #[arg(long = "config", global = true, value_name = "k=v")]
    config: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Fredholm verdict on a problem file; writes `symbol_surface.csv`
    /// and `check_report.txt`.
    Check {
        /// Problem file (`key = value` lines).
        path: PathBuf,
    },
    /// Solve the binomial equation of one side by the Neumann series; writes
    /// `solution.csv` and `solve_report.txt`.
    Solve {
        /// Problem file.
        path: PathBuf,
        /// Which binomial: `plus` solves (aI - bW)u = f, `minus` solves
        /// (cI - dW)u = f.
        #[arg(long, value_enum, default_value_t = Side::Plus)]
        side: Side,
        /// Right-hand side: `bump` for the standard centered Gaussian bump,
        /// or a path to a solution-format CSV (`x,t,re_u,im_u`).
        #[arg(long, default_value = "bump")]
        rhs: String,
    },
    /// Run the full invariant suite; writes `validation_report.txt`.
    Validate,
    /// Finite-section singular-value oracle for the operator N; writes
    /// `decay.csv` and prints the classification.
    Oracle {
        /// Problem file.
        path: PathBuf,
        /// Truncation sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = vec![128usize, 256, 512, 1024])]
        sizes: Vec<usize>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Side {
    Plus,
    Minus,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Error::NonConvergence { iterations, residual }) => {
            eprintln!("error: no convergence after {iterations} iterations (residual {residual:.3e})");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    std::fs::create_dir_all(&cli.out)?;
    match &cli.command {
        Command::Check { path } => cmd_check(cli, path),
        Command::Solve { path, side, rhs } => cmd_solve(cli, path, *side, rhs),
        Command::Validate => cmd_validate(cli),
        Command::Oracle { path, sizes } => cmd_oracle(cli, path, sizes),
    }
}

/// Load the problem file and apply `--config` overrides.
fn load_with_overrides(cli: &Cli, path: &Path) -> Result<ProblemFile> {
    let mut pf = load_problem(path)?;
    for kv in &cli.config {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Problem(format!("--config expects key=value, got `{kv}`")))?;
        pf.config.set(k.trim(), v.trim())?;
    }
    Ok(pf)
}

fn write_report(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

fn cmd_check(cli: &Cli, path: &Path) -> Result<ExitCode> {
    let pf = load_with_overrides(cli, path)?;
    let spec = pf.build()?;
    let verdict = fredholm_verdict(&spec)?;

    let c0 = spec.clusters(Endpoint::Zero)?;
    let ci = spec.clusters(Endpoint::Infinity)?;
    let (surface, _) = condition_ii(&spec, &c0, &ci)?;
    write_symbol_surface(&surface, &cli.out.join("symbol_surface.csv"))?;

    let report = format!("{}\n[config]\n{}", verdict.report_text(), pf.config.echo());
    print!("{report}");
    write_report(&cli.out, "check_report.txt", &report)?;

    Ok(match verdict.status {
        VerdictStatus::Sufficient => ExitCode::SUCCESS,
        _ => ExitCode::from(2),
    })
}

fn cmd_solve(cli: &Cli, path: &Path, side: Side, rhs: &str) -> Result<ExitCode> {
    let pf = load_with_overrides(cli, path)?;
    let spec = pf.build()?;
    let (u_expr, v_expr, label) = match side {
        Side::Plus => (spec.a.clone(), spec.b.clone(), "plus"),
        Side::Minus => (spec.c.clone(), spec.d.clone(), "minus"),
    };
    let op = BinomialOperator::new(u_expr, v_expr, spec.shift.clone(), spec.p)?;
    let c0 = op.clusters(Endpoint::Zero, spec.cluster_epsilon)?;
    let ci = op.clusters(Endpoint::Infinity, spec.cluster_epsilon)?;
    let decision = check_fo_conditions(&op, &c0, &ci, spec.grid)?;

    if decision.branch == Branch::None {
        let report = format!(
            "side = {label}\nbranch = {}\nundecided_near_boundary = {}\n",
            decision.branch, decision.undecided_near_boundary
        );
        print!("{report}");
        write_report(&cli.out, "solve_report.txt", &report)?;
        return Ok(ExitCode::from(3));
    }

    let f = load_rhs(rhs, &spec)?;
    let outcome = neumann_solve(&op, &f, &decision, pf.config.tol_solve, 500)?;
    write_solution(&outcome.u, &cli.out.join("solution.csv"))?;

    let report = format!(
        "side = {label}\nbranch = {}\niterations = {}\nresidual = {:.16e}\n[config]\n{}",
        decision.branch,
        outcome.iterations,
        outcome.residual,
        pf.config.echo()
    );
    print!("{report}");
    write_report(&cli.out, "solve_report.txt", &report)?;
    Ok(ExitCode::SUCCESS)
}

/// Right-hand side: the standard bump, or a solution-format CSV re-read onto
/// the problem grid.
fn load_rhs(rhs: &str, spec: &frshift::fredholm::ProblemSpec) -> Result<SampledFunction> {
    if rhs == "bump" {
        return Ok(gaussian_bump(spec.grid, 0.0, 1.0));
    }
    let text = std::fs::read_to_string(rhs)?;
    let mut values = Vec::with_capacity(spec.grid.n);
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            continue; // header row
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(Error::Problem(format!(
                "rhs file {rhs}: line {} has {} columns, expected 4 (x,t,re_u,im_u)",
                i + 1,
                cols.len()
            )));
        }
        let re: f64 = cols[2]
            .trim()
            .parse()
            .map_err(|_| Error::Problem(format!("rhs file {rhs}: bad float on line {}", i + 1)))?;
        let im: f64 = cols[3]
            .trim()
            .parse()
            .map_err(|_| Error::Problem(format!("rhs file {rhs}: bad float on line {}", i + 1)))?;
        values.push(Complex64::new(re, im));
    }
    if values.len() != spec.grid.n {
        return Err(Error::Problem(format!(
            "rhs file {rhs}: {} samples, grid has {}",
            values.len(),
            spec.grid.n
        )));
    }
    Ok(SampledFunction {
        grid: spec.grid,
        values,
    })
}

fn cmd_validate(cli: &Cli) -> Result<ExitCode> {
    let report = run_validation(cli.seed)?;
    let text = report.text();
    print!("{text}");
    write_report(&cli.out, "validation_report.txt", &text)?;
    if report.pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        let failing = report
            .first_failure()
            .map(|c| c.name)
            .unwrap_or_default();
        eprintln!("validation failed: {failing}");
        Ok(ExitCode::from(5))
    }
}

fn cmd_oracle(cli: &Cli, path: &Path, sizes: &[usize]) -> Result<ExitCode> {
    let pf = load_with_overrides(cli, path)?;
    let spec = pf.build()?;
    if sizes.is_empty() {
        return Err(Error::Problem("oracle needs at least one size".into()));
    }
    for &m in sizes {
        if m > DEFAULT_SECTION_CAP {
            return Err(Error::SizeCap(format!(
                "truncation size {m} exceeds cap {DEFAULT_SECTION_CAP}"
            )));
        }
    }
    let verdict = fredholm_verdict_with_oracle(&spec, sizes)?;
    let profile = verdict
        .oracle_profile
        .as_ref()
        .expect("oracle verdict carries a profile");
    write_decay(profile, &cli.out.join("decay.csv"))?;

    let mut report = String::new();
    report.push_str(&format!("classification = {}\n", profile.classification));
    for (m, sigma) in &profile.entries {
        report.push_str(&format!("sigma_min[{m}] = {sigma:.16e}\n"));
    }
    report.push_str(&format!("[config]\n{}", pf.config.echo()));
    print!("{report}");
    write_report(&cli.out, "oracle_report.txt", &report)?;
    Ok(ExitCode::SUCCESS)
}
