//! Riemannian gradient descent and trust-region Newton on the quotient.

mod gd;
mod retraction;
mod trust_region;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gd::solve_gd;
pub use retraction::retract;
pub use trust_region::{solve_newton_tr, truncated_cg, TcgExit, TcgOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Retraction {
    /// Polar factor on the Stiefel slots, closed-form geodesic on `P`.
    Polar,
    /// The exact geodesic of the quotient.
    Geodesic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Gd,
    Newton,
}

macro_rules! string_enum {
    ($ty:ident, $($variant:ident => $name:literal),+) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self {
                    $($ty::$variant => $name),+
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    _ => Err(Error::Config(format!(concat!("unknown ", stringify!($ty), " '{}'"), s))),
                }
            }
        }
    };
}

string_enum!(Retraction, Polar => "polar", Geodesic => "geodesic");
string_enum!(Method, Gd => "gd", Newton => "newton");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    pub max_iter: usize,
    /// Stop once the g-norm of the Riemannian gradient is at most this.
    pub gtol: f64,
    /// Armijo sufficient-decrease factor.
    pub armijo: f64,
    /// Step reduction factor per backtrack.
    pub backtrack: f64,
    pub initial_step: f64,
    /// Upper bound on the g-length of a line-search trial step.
    pub max_step_length: f64,
    pub max_backtracks: usize,
    pub initial_radius: f64,
    pub max_radius: f64,
    /// Minimum model agreement ratio for accepting a trust-region step.
    pub accept_ratio: f64,
    /// Inner iteration cap of truncated CG; zero means the manifold dimension.
    pub cg_max_iter: usize,
    /// Residual reduction target `‖r‖ ≤ ‖r₀‖ min(‖r₀‖^θ, κ)` of truncated CG.
    pub cg_kappa: f64,
    pub cg_theta: f64,
    pub retraction: Retraction,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::Gd,
            max_iter: 500,
            gtol: 1e-10,
            armijo: 1e-4,
            backtrack: 0.5,
            initial_step: 1.0,
            max_step_length: 1.0,
            max_backtracks: 60,
            initial_radius: 1.0,
            max_radius: 100.0,
            accept_ratio: 0.1,
            cg_max_iter: 0,
            cg_kappa: 0.1,
            cg_theta: 1.0,
            retraction: Retraction::Polar,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("gtol", self.gtol),
            ("initial_step", self.initial_step),
            ("max_step_length", self.max_step_length),
            ("initial_radius", self.initial_radius),
            ("max_radius", self.max_radius),
            ("cg_kappa", self.cg_kappa),
            ("cg_theta", self.cg_theta),
        ];
        for (name, x) in positive {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {x}")));
            }
        }
        let unit = [
            ("armijo", self.armijo),
            ("backtrack", self.backtrack),
            ("accept_ratio", self.accept_ratio),
        ];
        for (name, x) in unit {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1), got {x}")));
            }
        }
        if self.initial_radius > self.max_radius {
            return Err(Error::Config("initial_radius exceeds max_radius".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverStatus {
    Converged,
    MaxIterations,
    LineSearchFailed,
    TrustRegionStalled,
}

/// One row of a solver trace. `step` is the accepted step size for gradient
/// descent and the trust-region radius for Newton.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iter: usize,
    pub cost: f64,
    pub gnorm: f64,
    pub step: f64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverTrace {
    pub records: Vec<TraceRecord>,
}

impl SolverTrace {
    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }
}

#[derive(Debug, Clone)]
pub struct SolverOutcome<T: crate::Scalar> {
    pub point: crate::Point<T>,
    pub trace: SolverTrace,
    pub status: SolverStatus,
}

pub(crate) struct Clock(std::time::Instant);

impl Clock {
    pub fn start() -> Self {
        Self(std::time::Instant::now())
    }

    pub fn ms(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1e3
    }
}
