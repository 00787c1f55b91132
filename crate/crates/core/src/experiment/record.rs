use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::{SolverConfig, SolverStatus, TraceRecord};
use crate::problems::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Timings {
    pub setup_ms: f64,
    pub solve_ms: f64,
    pub total_ms: f64,
}

/// Self-contained result of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: ProblemSpec,
    pub solver: SolverConfig,
    pub status: SolverStatus,
    pub iterations: usize,
    pub final_cost: f64,
    pub final_gnorm: f64,
    /// Optimal objective from the truncated SVD, when known.
    pub optimal_value: Option<f64>,
    pub relative_gap: Option<f64>,
    pub trace: Vec<TraceRecord>,
    pub timings: Timings,
}

impl RunRecord {
    /// Copy with every wall-clock field zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        out.timings = Timings::default();
        for r in &mut out.trace {
            r.elapsed_ms = 0.0;
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The trace as CSV with header `iter,cost,gnorm,step,elapsed_ms`.
    pub fn trace_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.trace {
            w.serialize(r).map_err(|e| Error::Config(format!("csv: {e}")))?;
        }
        if self.trace.is_empty() {
            w.write_record(["iter", "cost", "gnorm", "step", "elapsed_ms"])
                .map_err(|e| Error::Config(format!("csv: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Config(format!("unknown output format '{s}'"))),
        }
    }
}

/// Atomically write the record as JSON or its trace as CSV.
pub fn write_record(record: &RunRecord, path: &Path, format: OutputFormat) -> Result<()> {
    let body = match format {
        OutputFormat::Json => record.to_json()? + "\n",
        OutputFormat::Csv => record.trace_csv()?,
    };
    super::write_atomic(path, body.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_is_fixed() {
        let rec = RunRecord {
            problem: ProblemSpec::default(),
            solver: SolverConfig::default(),
            status: SolverStatus::Converged,
            iterations: 0,
            final_cost: 1.0,
            final_gnorm: 0.0,
            optimal_value: None,
            relative_gap: None,
            trace: vec![TraceRecord {
                iter: 0,
                cost: 1.5,
                gnorm: 0.25,
                step: 0.0,
                elapsed_ms: 3.0,
            }],
            timings: Timings::default(),
        };
        let csv = rec.trace_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("iter,cost,gnorm,step,elapsed_ms"));
        assert_eq!(lines.next(), Some("0,1.5,0.25,0.0,3.0"));
        let mut empty = rec.clone();
        empty.trace.clear();
        assert_eq!(empty.trace_csv().unwrap().trim(), "iter,cost,gnorm,step,elapsed_ms");
        let back: RunRecord = serde_json::from_str(&rec.to_json().unwrap()).unwrap();
        assert_eq!(back, rec);
    }
}
