//! TOML run configuration.
//!
//! ```toml
//! [run]
//! command = "converge"          # optional when given on the command line
//! richardson = true             # default: on for converge, off otherwise
//! richardson_order = 1
//! t_star = [0.01, 0.05, 0.1]    # nu-star only
//! residual_points = 5           # residual-check: n x n interior sample
//! residual_tol = 1e-6
//!
//! [problem]
//! library = "example_9_1"       # or a custom problem, see below
//!
//! [orders]
//! nu = [0.3, 0.5]               # one value or a sweep
//! nu1 = 0.1                     # library overrides; default nu/3, nu/2
//! mu1 = 0.15
//!
//! [grid]
//! K = [10, 20]                  # one value or a list; a scalar is broadcast
//! J = [10, 20]
//!
//! [output]
//! path = "errors.csv"
//! snapshots = 8
//! emit_samples = false
//! samples_nu = 0.7
//! samples_count = 200
//! ```
//!
//! A custom problem gives every field in `[problem]` as an expression in
//! `x`, `t` (and `u` for `nonlinearity`), orders as `nu`, `nu_list`,
//! `mu_list`, plus `[kernel]` and `[bc]`:
//!
//! ```toml
//! [problem]
//! diffusion = "1"
//! advection = "0"
//! memory_coeff = "0"
//! rho0 = "1"
//! rho = []
//! gamma = []
//! nonlinearity = "0"
//! source = "0"
//! initial = "sin(pi*x)"
//! exact = "exp(-pi^2*t)*sin(pi*x)"
//! length = 1.0
//! horizon = 1.0
//!
//! [kernel]
//! kind = "none"                 # "power" takes beta; "custom" takes kernel, antiderivative
//!
//! [bc]
//! left = { c_deriv = 0.0, c_value = 1.0, data = "0" }
//! right = { c_deriv = 0.0, c_value = 1.0, data = "0" }
//! ```

use std::path::PathBuf;

use fracsolve_core::kernels::nu_hat_gamma;
use fracsolve_core::problem::{
    by_name, BoundaryCondition, Expr, FractionalOrders, MemoryKernel, ProblemError, ProblemSpec,
    LIBRARY_NAMES,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    Converge,
    NuStar,
    ResidualCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Converge => "converge",
            Command::NuStar => "nu-star",
            Command::ResidualCheck => "residual-check",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("missing required key '{0}'")]
    MissingKey(String),
    #[error("unknown library problem '{0}' (known: {known})", known = LIBRARY_NAMES.join(", "))]
    UnknownProblem(String),
    #[error("invalid value for '{key}': {message}")]
    Invalid { key: String, message: String },
    #[error("no command given on the command line or in [run]")]
    NoCommand,
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    run: Option<RunSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    problem: Option<ProblemSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orders: Option<OrdersSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<GridSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kernel: Option<KernelSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bc: Option<BcSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<OutputSection>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    richardson: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    richardson_order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_star: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_tol: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    library: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diffusion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    advection: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    memory_coeff: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nonlinearity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    initial: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    horizon: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrdersSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<OneOrMany<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu_list: Option<Vec<f64>>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    k: Option<OneOrMany<usize>>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    j: Option<OneOrMany<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelSection {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kernel: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    antiderivative: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BcSide {
    c_deriv: f64,
    c_value: f64,
    data: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BcSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    left: Option<BcSide>,
    #[serde(skip_serializing_if = "Option::is_none")]
    right: Option<BcSide>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    snapshots: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    emit_samples: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples_nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples_count: Option<usize>,
}

/// Which problem to solve.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemChoice {
    /// A library problem; `nu1`/`mu1` override the `ν/3`, `ν/2` defaults.
    Library {
        name: String,
        nu1: Option<f64>,
        mu1: Option<f64>,
    },
    /// A fully specified problem. Its `orders.nu` is replaced by each value
    /// of the sweep.
    Custom(Box<ProblemSpec<f64>>),
}

/// Fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    /// `None` only for `nu-star`, which needs no problem.
    pub problem: Option<ProblemChoice>,
    pub nu: Vec<f64>,
    pub grids: Vec<(usize, usize)>,
    pub richardson: bool,
    pub richardson_order: u32,
    pub t_star: Vec<f64>,
    pub output: Option<PathBuf>,
    pub snapshots: usize,
    pub emit_samples: bool,
    /// Order for the kernel curves; `None` uses `min_j ν*_j` of each `T*`.
    pub samples_nu: Option<f64>,
    pub samples_count: usize,
    pub residual_points: usize,
    pub residual_tol: f64,
}

pub const DEFAULT_NU_SWEEP: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const DEFAULT_GRIDS: [(usize, usize); 3] = [(10, 10), (20, 20), (30, 30)];
pub const DEFAULT_T_STAR: [f64; 11] = [0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.1, 0.11];
pub const DEFAULT_SNAPSHOTS: usize = 8;
pub const DEFAULT_SAMPLES: usize = 200;

impl RunSpec {
    /// The problem at order `nu`.
    pub fn problem_for(&self, nu: f64) -> Result<ProblemSpec<f64>, ProblemError> {
        match &self.problem {
            Some(ProblemChoice::Library { name, nu1, mu1 }) => by_name(name, nu, *nu1, *mu1),
            Some(ProblemChoice::Custom(p)) => {
                let mut p = (**p).clone();
                p.orders = FractionalOrders::new(nu, p.orders.nu_list, p.orders.mu_list)?;
                p.check()?;
                Ok(p)
            }
            None => Err(ProblemError::Invalid("no problem configured".into())),
        }
    }

    /// Serializes back to the config syntax with every default spelled out.
    pub fn to_toml(&self) -> String {
        let mut file = FileConfig {
            run: Some(RunSection {
                command: Some(self.command),
                richardson: Some(self.richardson),
                richardson_order: Some(self.richardson_order),
                t_star: Some(self.t_star.clone()),
                residual_points: Some(self.residual_points),
                residual_tol: Some(self.residual_tol),
            }),
            output: Some(OutputSection {
                path: self.output.as_ref().map(|p| p.display().to_string()),
                snapshots: Some(self.snapshots),
                emit_samples: Some(self.emit_samples),
                samples_nu: self.samples_nu,
                samples_count: Some(self.samples_count),
            }),
            ..FileConfig::default()
        };
        if !self.grids.is_empty() {
            file.grid = Some(GridSection {
                k: Some(OneOrMany::Many(self.grids.iter().map(|g| g.0).collect())),
                j: Some(OneOrMany::Many(self.grids.iter().map(|g| g.1).collect())),
            });
        }
        let mut orders = OrdersSection {
            nu: (!self.nu.is_empty()).then(|| OneOrMany::Many(self.nu.clone())),
            ..OrdersSection::default()
        };
        match &self.problem {
            None => {}
            Some(ProblemChoice::Library { name, nu1, mu1 }) => {
                file.problem = Some(ProblemSection {
                    library: Some(name.clone()),
                    ..ProblemSection::default()
                });
                orders.nu1 = *nu1;
                orders.mu1 = *mu1;
            }
            Some(ProblemChoice::Custom(p)) => {
                let text = |e: &Expr| e.to_string();
                file.problem = Some(ProblemSection {
                    library: None,
                    name: Some(p.name.clone()),
                    diffusion: Some(text(&p.diffusion)),
                    advection: Some(text(&p.advection)),
                    memory_coeff: Some(text(&p.memory_coeff)),
                    rho0: Some(text(&p.rho0)),
                    rho: Some(p.rho.iter().map(text).collect()),
                    gamma: Some(p.gamma.iter().map(text).collect()),
                    nonlinearity: Some(text(&p.nonlinearity)),
                    source: Some(text(&p.source)),
                    initial: Some(text(&p.initial)),
                    exact: p.exact.as_ref().map(text),
                    length: Some(p.length),
                    horizon: Some(p.horizon),
                });
                orders.nu_list = Some(p.orders.nu_list.clone());
                orders.mu_list = Some(p.orders.mu_list.clone());
                file.kernel = Some(match &p.kernel {
                    MemoryKernel::None => KernelSection {
                        kind: "none".into(),
                        beta: None,
                        kernel: None,
                        antiderivative: None,
                    },
                    MemoryKernel::Power { beta } => KernelSection {
                        kind: "power".into(),
                        beta: Some(*beta),
                        kernel: None,
                        antiderivative: None,
                    },
                    MemoryKernel::Custom {
                        kernel,
                        antiderivative,
                    } => KernelSection {
                        kind: "custom".into(),
                        beta: None,
                        kernel: Some(text(kernel)),
                        antiderivative: Some(text(antiderivative)),
                    },
                });
                let side = |bc: &BoundaryCondition<f64>| BcSide {
                    c_deriv: bc.c_deriv,
                    c_value: bc.c_value,
                    data: text(&bc.data),
                };
                file.bc = Some(BcSection {
                    left: Some(side(&p.left)),
                    right: Some(side(&p.right)),
                });
            }
        }
        file.orders = Some(orders);
        toml::to_string(&file).expect("run spec serializes to TOML")
    }
}

fn expr(key: &str, src: &str) -> Result<Expr, ConfigError> {
    Expr::parse(src).map_err(|e| invalid(key, e.to_string()))
}

fn required<T>(value: Option<T>, key: &str) -> Result<T, ConfigError> {
    value.ok_or_else(|| ConfigError::MissingKey(key.to_string()))
}

fn custom_problem(
    section: ProblemSection,
    orders: &OrdersSection,
    nu: f64,
    kernel: Option<KernelSection>,
    bc: Option<BcSection>,
) -> Result<ProblemSpec<f64>, ConfigError> {
    let field = |value: Option<String>, key: &str| expr(key, &required(value, key)?);
    let list = |value: Option<Vec<String>>, key: &str| -> Result<Vec<Expr>, ConfigError> {
        value.unwrap_or_default().iter().map(|s| expr(key, s)).collect()
    };
    let kernel = match kernel {
        None => return Err(ConfigError::MissingKey("kernel".into())),
        Some(k) => match k.kind.as_str() {
            "none" => MemoryKernel::None,
            "power" => MemoryKernel::Power {
                beta: required(k.beta, "kernel.beta")?,
            },
            "custom" => MemoryKernel::Custom {
                kernel: field(k.kernel, "kernel.kernel")?,
                antiderivative: field(k.antiderivative, "kernel.antiderivative")?,
            },
            other => {
                return Err(invalid(
                    "kernel.kind",
                    format!("expected none, power or custom, got '{other}'"),
                ))
            }
        },
    };
    let bc = required(bc, "bc")?;
    let side = |s: Option<BcSide>, key: &str| -> Result<BoundaryCondition<f64>, ConfigError> {
        let s = required(s, key)?;
        Ok(BoundaryCondition {
            c_deriv: s.c_deriv,
            c_value: s.c_value,
            data: expr(&format!("{key}.data"), &s.data)?,
        })
    };
    let orders = FractionalOrders::new(
        nu,
        orders.nu_list.clone().unwrap_or_default(),
        orders.mu_list.clone().unwrap_or_default(),
    )
    .map_err(|e| invalid("orders", e.to_string()))?;
    let problem = ProblemSpec {
        name: section.name.unwrap_or_else(|| "custom".into()),
        orders,
        diffusion: field(section.diffusion, "problem.diffusion")?,
        advection: field(section.advection, "problem.advection")?,
        memory_coeff: field(section.memory_coeff, "problem.memory_coeff")?,
        rho0: field(section.rho0, "problem.rho0")?,
        rho: list(section.rho, "problem.rho")?,
        gamma: list(section.gamma, "problem.gamma")?,
        kernel,
        nonlinearity: field(section.nonlinearity, "problem.nonlinearity")?,
        source: field(section.source, "problem.source")?,
        initial: field(section.initial, "problem.initial")?,
        left: side(bc.left, "bc.left")?,
        right: side(bc.right, "bc.right")?,
        exact: section
            .exact
            .map(|s| expr("problem.exact", &s))
            .transpose()?,
        length: section.length.unwrap_or(1.0),
        horizon: section.horizon.unwrap_or(1.0),
    };
    problem
        .check()
        .map_err(|e| invalid("problem", e.to_string()))?;
    Ok(problem)
}

/// Parses a config. `command` (from the command line) takes precedence over
/// `[run] command`.
pub fn parse_config(text: &str, command: Option<Command>) -> Result<RunSpec, ConfigError> {
    let file: FileConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let run = file.run.unwrap_or_default();
    let command = command.or(run.command).ok_or(ConfigError::NoCommand)?;
    let output = file.output.unwrap_or_default();
    let orders = file.orders.unwrap_or_default();

    let nu = match orders.nu.clone() {
        Some(v) => v.into_vec(),
        None => match command {
            Command::Converge | Command::ResidualCheck => DEFAULT_NU_SWEEP.to_vec(),
            Command::Solve => return Err(ConfigError::MissingKey("orders.nu".into())),
            Command::NuStar => Vec::new(),
        },
    };
    if nu.iter().any(|&v| !(v > 0.0 && v <= 1.0)) {
        return Err(invalid("orders.nu", format!("orders must lie in (0,1], got {nu:?}")));
    }

    let problem = match file.problem {
        None if command == Command::NuStar => None,
        None => return Err(ConfigError::MissingKey("problem".into())),
        Some(section) => Some(match section.library.clone() {
            Some(name) => {
                if !LIBRARY_NAMES.contains(&name.as_str()) {
                    return Err(ConfigError::UnknownProblem(name));
                }
                if file.kernel.is_some() || file.bc.is_some() {
                    return Err(invalid(
                        "problem.library",
                        "library problems fix [kernel] and [bc]; remove those sections",
                    ));
                }
                ProblemChoice::Library {
                    name,
                    nu1: orders.nu1,
                    mu1: orders.mu1,
                }
            }
            None => {
                let first = *nu
                    .first()
                    .ok_or_else(|| ConfigError::MissingKey("orders.nu".into()))?;
                ProblemChoice::Custom(Box::new(custom_problem(
                    section, &orders, first, file.kernel, file.bc,
                )?))
            }
        }),
    };

    let grids = match file.grid {
        Some(g) => {
            let k = required(g.k, "grid.K")?.into_vec();
            let j = required(g.j, "grid.J")?.into_vec();
            let pairs: Vec<(usize, usize)> = match (k.len(), j.len()) {
                (a, b) if a == b => k.into_iter().zip(j).collect(),
                (1, _) => j.into_iter().map(|j| (k[0], j)).collect(),
                (_, 1) => k.into_iter().map(|k| (k, j[0])).collect(),
                (a, b) => {
                    return Err(invalid("grid", format!("K has {a} entries but J has {b}")))
                }
            };
            if pairs.is_empty() {
                return Err(invalid("grid", "no grids given"));
            }
            if let Some(&(k, j)) = pairs.iter().find(|&&(k, j)| k < 2 || j < 1) {
                return Err(invalid("grid", format!("need K >= 2 and J >= 1, got ({k}, {j})")));
            }
            pairs
        }
        None => match command {
            Command::Converge => DEFAULT_GRIDS.to_vec(),
            Command::Solve => return Err(ConfigError::MissingKey("grid".into())),
            _ => Vec::new(),
        },
    };

    let t_star = run.t_star.unwrap_or_else(|| DEFAULT_T_STAR.to_vec());
    if command == Command::NuStar {
        if t_star.is_empty() {
            return Err(invalid("run.t_star", "list is empty"));
        }
        if let Some(bad) = t_star.iter().find(|&&t| nu_hat_gamma(t).is_err()) {
            return Err(invalid(
                "run.t_star",
                format!("{bad} is outside (0, e^-gamma]"),
            ));
        }
    }

    let spec = RunSpec {
        command,
        problem,
        nu,
        grids,
        richardson: run.richardson.unwrap_or(command == Command::Converge),
        richardson_order: run.richardson_order.unwrap_or(1),
        t_star,
        output: output.path.map(PathBuf::from),
        snapshots: output.snapshots.unwrap_or(DEFAULT_SNAPSHOTS),
        emit_samples: output.emit_samples.unwrap_or(false),
        samples_nu: output.samples_nu,
        samples_count: output.samples_count.unwrap_or(DEFAULT_SAMPLES),
        residual_points: run.residual_points.unwrap_or(5),
        residual_tol: run.residual_tol.unwrap_or(1e-6),
    };
    check_command(&spec)?;
    Ok(spec)
}

fn check_command(spec: &RunSpec) -> Result<(), ConfigError> {
    if spec.richardson_order < 1 {
        return Err(invalid("run.richardson_order", "must be >= 1"));
    }
    if spec.snapshots < 1 {
        return Err(invalid("output.snapshots", "must be >= 1"));
    }
    if let Some(nu) = spec.samples_nu {
        if !(nu > 0.0 && nu < 1.0) {
            return Err(invalid("output.samples_nu", format!("must lie in (0,1), got {nu}")));
        }
    }
    match spec.command {
        Command::Solve => {
            if spec.nu.len() != 1 {
                return Err(invalid("orders.nu", "solve takes a single order"));
            }
            if spec.grids.len() != 1 {
                return Err(invalid("grid", "solve takes a single (K, J)"));
            }
        }
        Command::Converge | Command::ResidualCheck => {
            if spec.nu.is_empty() {
                return Err(ConfigError::MissingKey("orders.nu".into()));
            }
            if spec.command == Command::Converge && spec.grids.is_empty() {
                return Err(ConfigError::MissingKey("grid".into()));
            }
            if spec.command == Command::ResidualCheck && spec.residual_points < 1 {
                return Err(invalid("run.residual_points", "must be >= 1"));
            }
            let has_exact = match &spec.problem {
                Some(ProblemChoice::Library { name, .. }) => name == "example_9_1",
                Some(ProblemChoice::Custom(p)) => p.exact.is_some(),
                None => false,
            };
            if !has_exact {
                return Err(invalid(
                    "problem.exact",
                    format!("{} needs a problem with an exact solution", spec.command.name()),
                ));
            }
        }
        Command::NuStar => {}
    }
    // every order of the sweep must give a well-formed problem
    if spec.problem.is_some() {
        for &nu in &spec.nu {
            spec.problem_for(nu)
                .map_err(|e| invalid("orders", format!("nu = {nu}: {e}")))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[problem]
library = "example_9_1"
[orders]
nu = 0.5
[grid]
K = 10
J = 10
"#;

    #[test]
    fn minimal_converge_defaults() {
        let spec = parse_config(MINIMAL, Some(Command::Converge)).unwrap();
        assert!(spec.richardson);
        assert_eq!(spec.richardson_order, 1);
        assert_eq!(spec.nu, vec![0.5]);
        assert_eq!(spec.grids, vec![(10, 10)]);
        assert_eq!(spec.snapshots, 8);
    }

    #[test]
    fn solve_defaults_to_plain_run() {
        let spec = parse_config(MINIMAL, Some(Command::Solve)).unwrap();
        assert!(!spec.richardson);
    }

    #[test]
    fn solve_without_grid_is_missing_key() {
        let text = "[problem]\nlibrary = \"example_9_2_linear\"\n[orders]\nnu = 0.4\n";
        assert_eq!(
            parse_config(text, Some(Command::Solve)),
            Err(ConfigError::MissingKey("grid".into()))
        );
    }

    #[test]
    fn converge_fills_table_sweep() {
        let text = "[run]\ncommand = \"converge\"\n[problem]\nlibrary = \"example_9_1\"\n";
        let spec = parse_config(text, None).unwrap();
        assert_eq!(spec.nu, DEFAULT_NU_SWEEP.to_vec());
        assert_eq!(spec.grids, DEFAULT_GRIDS.to_vec());
    }

    #[test]
    fn unknown_problem_and_bad_syntax() {
        let text = "[problem]\nlibrary = \"example_9_3\"\n[orders]\nnu = 0.5\n";
        assert!(matches!(
            parse_config(text, Some(Command::Converge)),
            Err(ConfigError::UnknownProblem(_))
        ));
        let err = parse_config("[grid\nK = 1", Some(Command::Solve)).unwrap_err();
        assert!(matches!(&err, ConfigError::Parse(m) if m.contains("line 1")), "{err}");
        let err = parse_config("[grid]\nL = 3\n", Some(Command::Solve)).unwrap_err();
        assert!(matches!(&err, ConfigError::Parse(m) if m.contains("L")), "{err}");
    }

    #[test]
    fn converge_needs_exact_solution() {
        let text = "[problem]\nlibrary = \"example_9_2_nonlinear\"\n";
        assert!(matches!(
            parse_config(text, Some(Command::Converge)),
            Err(ConfigError::Invalid { key, .. }) if key == "problem.exact"
        ));
    }

    #[test]
    fn nu_star_checks_t_star() {
        let spec = parse_config("", Some(Command::NuStar)).unwrap();
        assert_eq!(spec.t_star.len(), 11);
        assert!(spec.problem.is_none());
        let err = parse_config("[run]\nt_star = [0.05, 0.6]\n", Some(Command::NuStar));
        assert!(matches!(err, Err(ConfigError::Invalid { .. })));
        assert_eq!(parse_config("", None), Err(ConfigError::NoCommand));
    }

    #[test]
    fn custom_problem_round_trips() {
        let text = r#"
[problem]
name = "robin heat"
diffusion = "1 + x*t"
advection = "0.5"
memory_coeff = "t"
rho0 = "1"
rho = ["1/2"]
gamma = []
nonlinearity = "-u^3"
source = "sin(pi*x)"
initial = "x*(1 - x)"
exact = "x*(1 - x)*exp(-t)"
length = 2.0
horizon = 0.5
[orders]
nu = [0.4, 0.8]
nu_list = [0.2]
[kernel]
kind = "custom"
kernel = "t^(-0.25)"
antiderivative = "t^0.75/0.75"
[bc]
left = { c_deriv = 1.0, c_value = -0.5, data = "t" }
right = { c_deriv = 0.0, c_value = 1.0, data = "0" }
[grid]
K = [8, 16]
J = 8
[output]
path = "out/run.csv"
emit_samples = true
"#;
        let spec = parse_config(text, Some(Command::Converge)).unwrap();
        assert_eq!(spec.grids, vec![(8, 8), (16, 8)]);
        let again = parse_config(&spec.to_toml(), None).unwrap();
        assert_eq!(spec, again);
        let p = spec.problem_for(0.8).unwrap();
        assert_eq!(p.orders.nu, 0.8);
        assert_eq!(p.length, 2.0);
    }

    #[test]
    fn library_round_trips() {
        for command in [Command::Solve, Command::Converge, Command::NuStar, Command::ResidualCheck] {
            let text = format!("{MINIMAL}[orders.extra]\n");
            // unknown sub-tables are rejected
            assert!(parse_config(&text, Some(command)).is_err());
            let spec = parse_config(MINIMAL, Some(command)).unwrap();
            assert_eq!(parse_config(&spec.to_toml(), None).unwrap(), spec);
        }
    }

    #[test]
    fn library_rejects_kernel_section() {
        let text = format!("{MINIMAL}[kernel]\nkind = \"none\"\n");
        assert!(parse_config(&text, Some(Command::Solve)).is_err());
    }
}
