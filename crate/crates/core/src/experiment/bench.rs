use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::optim::SolverStatus;
use crate::quotient::MetricParams;

use super::{run_experiment, ExperimentConfig};

/// Values taken by each metric weight in a sweep.
pub const BENCH_GRID: [f64; 5] = [0.1, 0.3, 1.0, 3.0, 10.0];

const PARAM_NAMES: [&str; 5] = ["alpha0", "alpha1", "beta", "gamma0", "gamma1"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub param: String,
    pub value: f64,
    pub status: SolverStatus,
    pub iterations: usize,
    pub final_cost: f64,
    pub final_gnorm: f64,
    pub relative_gap: Option<f64>,
    pub time_ms: f64,
}

/// Vary one metric weight at a time over [`BENCH_GRID`], keeping the others
/// at the configured values, and run the configured experiment for each.
pub fn run_bench(base: &ExperimentConfig) -> Result<Vec<BenchRow>> {
    let jobs: Vec<(usize, f64)> = (0..5)
        .flat_map(|k| BENCH_GRID.iter().map(move |&v| (k, v)))
        .collect();
    jobs.par_iter()
        .map(|&(k, value)| {
            let mut cfg = base.clone();
            let mut weights = base.problem.params.as_array();
            weights[k] = value;
            cfg.problem.params = MetricParams::from_array(weights)?;
            let rec = run_experiment(&cfg)?;
            Ok(BenchRow {
                param: PARAM_NAMES[k].to_string(),
                value,
                status: rec.status,
                iterations: rec.iterations,
                final_cost: rec.final_cost,
                final_gnorm: rec.final_gnorm,
                relative_gap: rec.relative_gap,
                time_ms: rec.timings.total_ms,
            })
        })
        .collect()
}

/// Fixed-width summary table of a sweep.
pub fn format_bench_table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:<7} {:>6} {:<20} {:>6} {:>12} {:>10} {:>10} {:>9}\n",
        "param", "value", "status", "iters", "cost", "gnorm", "gap", "ms"
    );
    for r in rows {
        let gap = r.relative_gap.map_or("-".to_string(), |g| format!("{g:.2e}"));
        out.push_str(&format!(
            "{:<7} {:>6} {:<20} {:>6} {:>12.6e} {:>10.2e} {:>10} {:>9.1}\n",
            r.param,
            r.value,
            format!("{:?}", r.status),
            r.iterations,
            r.final_cost,
            r.final_gnorm,
            gap,
            r.time_ms
        ));
    }
    out
}
