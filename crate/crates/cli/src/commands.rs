//! The four commands. Each returns its CSV text; nothing here touches the
//! filesystem or the process exit code.

use std::fmt::Write as _;
use std::io::Write;

use fracsolve_core::kernels::{positivity_report, SampleRequest, STANDARD_RATIOS};
use fracsolve_core::problem::{residual_oracle, validate_hypotheses, ProblemSpec};
use fracsolve_core::scheme::{advance, build_grid, max_abs_error, richardson, SolutionField};
use rayon::prelude::*;

use crate::config::{Command, RunSpec};
use crate::CliError;

/// Fixed 17-significant-digit formatting for byte-stable output.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV produced by a command; `samples` is only set by `nu-star` with
/// sample emission on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub table: String,
    pub samples: Option<String>,
}

/// Grid sample density for hypothesis checks.
const VALIDATION_SAMPLES: usize = 20;

fn warn(problem: &ProblemSpec<f64>, log: &mut dyn Write) {
    let report = validate_hypotheses(problem, VALIDATION_SAMPLES);
    for entry in report.warnings() {
        // best effort: a closed stderr must not turn into a solver failure
        let _ = writeln!(log, "warning ({}, nu = {}): {entry}", problem.name, problem.orders.nu);
    }
}

fn field(
    problem: &ProblemSpec<f64>,
    cells: usize,
    steps: usize,
    spec: &RunSpec,
) -> Result<SolutionField<f64>, CliError> {
    let solver = |e| CliError::Solver(format!("{} (nu = {}): {e}", problem.name, problem.orders.nu));
    let grid = build_grid(cells, steps, problem.length, problem.horizon).map_err(solver)?;
    let coarse = advance(problem, &grid).map_err(solver)?;
    if !spec.richardson {
        return Ok(coarse);
    }
    let fine_grid =
        build_grid(cells, 2 * steps, problem.length, problem.horizon).map_err(solver)?;
    let fine = advance(problem, &fine_grid).map_err(solver)?;
    richardson(&coarse, &fine, spec.richardson_order).map_err(solver)
}

fn problem_at(spec: &RunSpec, nu: f64) -> Result<ProblemSpec<f64>, CliError> {
    spec.problem_for(nu)
        .map_err(|e| CliError::Config(format!("nu = {nu}: {e}")))
}

/// Time levels written by `solve`: `count` evenly spaced levels including
/// the first and last.
pub fn snapshot_levels(steps: usize, count: usize) -> Vec<usize> {
    if count <= 1 {
        return vec![steps];
    }
    let mut levels: Vec<usize> = (0..count)
        .map(|i| ((i * steps) as f64 / (count - 1) as f64).round() as usize)
        .collect();
    levels.dedup();
    levels
}

pub fn cmd_solve(spec: &RunSpec, log: &mut dyn Write) -> Result<Output, CliError> {
    let problem = problem_at(spec, spec.nu[0])?;
    warn(&problem, log);
    let (cells, steps) = spec.grids[0];
    let u = field(&problem, cells, steps, spec)?;
    let mut table = String::from("t,x,u\n");
    for j in snapshot_levels(steps, spec.snapshots) {
        let t = fmt_float(u.grid.t(j));
        for (k, v) in u.row(j).iter().enumerate() {
            let _ = writeln!(table, "{t},{},{}", fmt_float(u.grid.x(k)), fmt_float(*v));
        }
    }
    Ok(Output {
        table,
        samples: None,
    })
}

/// Worker count from `FRACSOLVE_THREADS`, or `None` for rayon's default.
pub fn thread_limit() -> Result<Option<usize>, CliError> {
    match std::env::var("FRACSOLVE_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "FRACSOLVE_THREADS must be a positive integer, got '{v}'"
            ))),
        },
    }
}

pub fn cmd_converge(spec: &RunSpec, log: &mut dyn Write) -> Result<Output, CliError> {
    let mut jobs = Vec::new();
    for &nu in &spec.nu {
        let problem = problem_at(spec, nu)?;
        warn(&problem, log);
        for &(k, j) in &spec.grids {
            jobs.push((problem.clone(), k, j));
        }
    }
    let run = |jobs: &[(ProblemSpec<f64>, usize, usize)]| -> Vec<Result<f64, CliError>> {
        jobs.par_iter()
            .map(|(p, k, j)| {
                let exact = p.exact.as_ref().ok_or_else(|| {
                    CliError::Config(format!("problem '{}' has no exact solution", p.name))
                })?;
                let u = field(p, *k, *j, spec)?;
                Ok(max_abs_error(&u, &|x, t| exact.at(x, t)))
            })
            .collect()
    };
    let results = match thread_limit()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(|| run(&jobs)),
        None => run(&jobs),
    };
    let mut table = String::from("nu,K,J,gimel\n");
    for ((p, k, j), r) in jobs.iter().zip(results) {
        let _ = writeln!(table, "{},{k},{j},{}", fmt_float(p.orders.nu), fmt_float(r?));
    }
    Ok(Output {
        table,
        samples: None,
    })
}

pub fn cmd_nu_star(spec: &RunSpec) -> Result<Output, CliError> {
    let mut table = String::from("t_star,nu_hat,nu_star_1,nu_star_2,nu_star_3\n");
    let mut samples = spec
        .emit_samples
        .then(|| String::from("t_star,t,omega,N_1,N_2,N_3\n"));
    for &t_star in &spec.t_star {
        let report = positivity_report(t_star, &STANDARD_RATIOS, None)
            .map_err(|e| CliError::Solver(format!("t_star = {t_star}: {e}")))?;
        let _ = write!(table, "{},{}", fmt_float(t_star), fmt_float(report.nu_hat_gamma));
        for (_, v) in &report.nu_star_by_ratio {
            let _ = write!(table, ",{}", fmt_float(*v));
        }
        table.push('\n');
        if let Some(out) = samples.as_mut() {
            let nu = spec
                .samples_nu
                .or_else(|| report.nu_star_min())
                .unwrap_or(0.5);
            let req = SampleRequest {
                nu,
                count: spec.samples_count,
            };
            let with_samples = positivity_report(t_star, &STANDARD_RATIOS, Some(req))
                .map_err(|e| CliError::Solver(format!("t_star = {t_star}: {e}")))?;
            for s in with_samples.samples.unwrap_or_default() {
                let _ = write!(out, "{},{},{}", fmt_float(t_star), fmt_float(s.t), fmt_float(s.omega));
                for n in &s.kernels {
                    let _ = write!(out, ",{}", fmt_float(*n));
                }
                out.push('\n');
            }
        }
    }
    Ok(Output { table, samples })
}

pub fn cmd_residual_check(spec: &RunSpec, log: &mut dyn Write) -> Result<Output, CliError> {
    let n = spec.residual_points;
    let mut table = String::from("nu,residual\n");
    for &nu in &spec.nu {
        let problem = problem_at(spec, nu)?;
        warn(&problem, log);
        let exact = problem.exact.clone().ok_or_else(|| {
            CliError::Config(format!("problem '{}' has no exact solution", problem.name))
        })?;
        let step = |len: f64, i: usize| len * i as f64 / (n + 1) as f64;
        let points: Vec<(f64, f64)> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| (i, j)))
            .map(|(i, j)| (step(problem.length, i), step(problem.horizon, j)))
            .collect();
        let r = residual_oracle(&problem, &|x, t| exact.at(x, t), &points, spec.residual_tol)
            .map_err(|e| CliError::Solver(format!("nu = {nu}: {e}")))?;
        let _ = writeln!(table, "{},{}", fmt_float(nu), fmt_float(r));
    }
    Ok(Output {
        table,
        samples: None,
    })
}

/// Runs the command named in `spec`; validation warnings go to `log`.
pub fn execute(spec: &RunSpec, log: &mut dyn Write) -> Result<Output, CliError> {
    match spec.command {
        Command::Solve => cmd_solve(spec, log),
        Command::Converge => cmd_converge(spec, log),
        Command::NuStar => cmd_nu_star(spec),
        Command::ResidualCheck => cmd_residual_check(spec, log),
    }
}
