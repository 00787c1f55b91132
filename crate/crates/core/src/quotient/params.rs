use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five positive weights of the ambient metric
/// `g[ω] = [α₀ω_U + (α₁−α₀)UUᵗω_U, βP⁻¹ω_PP⁻¹, γ₀ω_V + (γ₁−γ₀)VVᵗω_V]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    pub alpha0: f64,
    pub alpha1: f64,
    pub beta: f64,
    pub gamma0: f64,
    pub gamma1: f64,
}

impl MetricParams {
    pub fn new(alpha0: f64, alpha1: f64, beta: f64, gamma0: f64, gamma1: f64) -> Result<Self> {
        let params = Self {
            alpha0,
            alpha1,
            beta,
            gamma0,
            gamma1,
        };
        params.validate()?;
        Ok(params)
    }

    /// All weights equal to one.
    pub fn unit() -> Self {
        Self {
            alpha0: 1.0,
            alpha1: 1.0,
            beta: 1.0,
            gamma0: 1.0,
            gamma1: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = self.as_array();
        if all.iter().all(|&x| x.is_finite() && x > 0.0) {
            Ok(())
        } else {
            Err(Error::MetricParams(format!(
                "all five weights must be finite and positive, got {all:?}"
            )))
        }
    }

    /// `δ = α₁ + γ₁`.
    pub fn delta(&self) -> f64 {
        self.alpha1 + self.gamma1
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.alpha0, self.alpha1, self.beta, self.gamma0, self.gamma1]
    }

    pub fn from_array(a: [f64; 5]) -> Result<Self> {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }
}

impl Default for MetricParams {
    fn default() -> Self {
        Self::unit()
    }
}

impl fmt::Display for MetricParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a0, a1, b, g0, g1] = self.as_array();
        write!(f, "{a0},{a1},{b},{g0},{g1}")
    }
}

/// Parses `a0,a1,b,g0,g1`.
impl FromStr for MetricParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values: Vec<f64> = s
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::MetricParams(format!("`{s}`: {e}")))?;
        let arr: [f64; 5] = values
            .try_into()
            .map_err(|_| Error::MetricParams(format!("`{s}`: expected five comma-separated values")))?;
        Self::from_array(arr)
    }
}
