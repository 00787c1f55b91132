//! Experiment configuration, execution and machine-readable records.

mod bench;
mod matrix_io;
mod record;

use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::optim::{solve_gd, solve_newton_tr, Method, SolverConfig};
use crate::problems::{make_problem, relative_gap, ProblemSpec};
use crate::quotient::metric_norm;
use crate::scalar::{Field, Scalar};

pub use bench::{format_bench_table, run_bench, BenchRow, BENCH_GRID};
pub use matrix_io::{format_matrix, parse_matrix, read_matrix, write_matrix};
pub use record::{write_record, OutputFormat, RunRecord, Timings};

/// A problem, a solver and where to put the record.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub solver: SolverConfig,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: ProblemSpec::default(),
            solver: SolverConfig::default(),
            out: None,
            format: OutputFormat::Json,
        }
    }
}

/// The configuration selected by `--config example`.
pub const EXAMPLE_CONFIG: &str = "\
# best rank-3 approximation of a seeded 20x15 matrix
kind = lowrank-approx
m = 20
n = 15
p = 3
field = real
params = 1,1,1,1,1
seed = 7
method = gd
max_iter = 500
gtol = 1e-10
retraction = polar
out = example-run.json
format = json
";

fn parse_value<V: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<V>
where
    V::Err: std::fmt::Display,
{
    value.parse::<V>().map_err(|e| Error::Parse {
        line,
        msg: format!("bad value '{value}' for '{key}': {e}"),
    })
}

/// Parse `key = value` lines; `#` starts a comment. Unknown keys are errors.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected 'key = value', got '{body}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let (pr, so) = (&mut cfg.problem, &mut cfg.solver);
        match key {
            "kind" => pr.kind = parse_value(key, value, line)?,
            "m" => pr.m = parse_value(key, value, line)?,
            "n" => pr.n = parse_value(key, value, line)?,
            "p" => pr.p = parse_value(key, value, line)?,
            "field" => pr.field = parse_value(key, value, line)?,
            "params" => pr.params = parse_value(key, value, line)?,
            "seed" => {
                pr.seed = parse_value(key, value, line)?;
                so.seed = pr.seed;
            }
            "density" => pr.density = parse_value(key, value, line)?,
            "data" => pr.data = Some(PathBuf::from(value)),
            "method" => so.method = parse_value(key, value, line)?,
            "max_iter" => so.max_iter = parse_value(key, value, line)?,
            "gtol" => so.gtol = parse_value(key, value, line)?,
            "initial_step" => so.initial_step = parse_value(key, value, line)?,
            "max_step_length" => so.max_step_length = parse_value(key, value, line)?,
            "initial_radius" => so.initial_radius = parse_value(key, value, line)?,
            "max_radius" => so.max_radius = parse_value(key, value, line)?,
            "retraction" => so.retraction = parse_value(key, value, line)?,
            "out" => cfg.out = Some(PathBuf::from(value)),
            "format" => cfg.format = parse_value(key, value, line)?,
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown key '{key}'"),
                })
            }
        }
    }
    cfg.problem.validate()?;
    cfg.solver.validate()?;
    Ok(cfg)
}

/// Load a configuration file; the name `example` selects [`EXAMPLE_CONFIG`].
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    if path.as_os_str() == "example" && !path.exists() {
        return parse_config(EXAMPLE_CONFIG);
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading config {}", path.display()), e))?;
    parse_config(&text)
}

/// Solve the configured problem and collect the record. Nothing is written.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunRecord> {
    match cfg.problem.field {
        Field::Real => run_typed::<f64>(cfg),
        Field::Complex => run_typed::<Complex64>(cfg),
    }
}

fn run_typed<T: Scalar>(cfg: &ExperimentConfig) -> Result<RunRecord> {
    let clock = std::time::Instant::now();
    let problem = make_problem::<T>(&cfg.problem)?;
    let start = problem.start_point(cfg.solver.seed)?;
    let setup_ms = clock.elapsed().as_secs_f64() * 1e3;
    let params = &cfg.problem.params;
    let outcome = match cfg.solver.method {
        Method::Gd => solve_gd(&problem.cost, &start, params, &cfg.solver)?,
        Method::Newton => solve_newton_tr(&problem.cost, &start, params, &cfg.solver)?,
    };
    let solve_ms = clock.elapsed().as_secs_f64() * 1e3 - setup_ms;
    let final_cost = problem.value(&outcome.point);
    let grad = crate::quotient::rgrad(
        &outcome.point,
        &crate::calculus::AmbientFunction::egrad(&problem.cost, outcome.point.coords()),
        params,
    )?;
    let final_gnorm = metric_norm(&outcome.point, &grad, params)?;
    Ok(RunRecord {
        problem: cfg.problem.clone(),
        solver: cfg.solver.clone(),
        status: outcome.status,
        iterations: outcome.trace.records.len().saturating_sub(1),
        final_cost,
        final_gnorm,
        optimal_value: problem.optimal_value,
        relative_gap: problem.optimal_value.map(|opt| relative_gap(final_cost, opt)),
        trace: outcome.trace.records,
        timings: Timings {
            setup_ms,
            solve_ms,
            total_ms: clock.elapsed().as_secs_f64() * 1e3,
        },
    })
}

/// Write `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let context = || format!("writing {}", path.display());
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| Error::io(context(), e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(context(), e))?;
    tmp.flush().map_err(|e| Error::io(context(), e))?;
    tmp.persist(path).map_err(|e| Error::io(context(), e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::Retraction;
    use crate::problems::ProblemKind;

    #[test]
    fn example_config_parses() {
        let cfg = parse_config(EXAMPLE_CONFIG).unwrap();
        assert_eq!(cfg.problem.kind, ProblemKind::LowrankApprox);
        assert_eq!((cfg.problem.m, cfg.problem.n, cfg.problem.p), (20, 15, 3));
        assert_eq!(cfg.solver.seed, 7);
        assert_eq!(cfg.solver.retraction, Retraction::Polar);
        assert_eq!(cfg.out.as_deref(), Some(Path::new("example-run.json")));
    }

    #[test]
    fn config_errors_carry_line_numbers() {
        let err = parse_config("m = 4\n\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_config("# c\nm = four\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(parse_config("m\n").is_err());
        assert!(parse_config("p = 40\n").is_err());
        assert!(parse_config("params = 1,1,0,1,1\n").is_err());
    }

    #[test]
    fn zero_iteration_cap_echoes_the_start() {
        let mut cfg = parse_config(EXAMPLE_CONFIG).unwrap();
        cfg.solver.max_iter = 0;
        let rec = run_experiment(&cfg).unwrap();
        assert_eq!(rec.iterations, 0);
        assert_eq!(rec.trace.len(), 1);
        assert_eq!(rec.trace[0].cost, rec.final_cost);
    }
}
