use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{eig_tsym, require_pd, Mat, TSymEigen};
use crate::scalar::Scalar;

/// Precomputed data for `ℒ(P)X = (β⁻¹ − 2δ⁻¹)X + δ⁻¹(P⁻¹XP + PXP⁻¹)` and its
/// inverse, which is a by-entry division in the eigenbasis of `P`.
#[derive(Debug, Clone)]
pub struct LyapunovContext<T: Scalar> {
    pub eigen: TSymEigen<T>,
    /// `M_ij = β⁻¹ − 2δ⁻¹ + δ⁻¹(Λ_i⁻¹Λ_j + Λ_iΛ_j⁻¹)`, strictly positive.
    pub m: DMatrix<f64>,
    pub beta: f64,
    pub delta: f64,
    p: Mat<T>,
    p_inv: Mat<T>,
}

impl<T: Scalar> LyapunovContext<T> {
    pub fn new(p: &Mat<T>, beta: f64, delta: f64) -> Result<Self> {
        let eigen = eig_tsym(p)?;
        Self::from_eigen(eigen, beta, delta)
    }

    pub fn from_eigen(eigen: TSymEigen<T>, beta: f64, delta: f64) -> Result<Self> {
        require_pd(&eigen, "lyapunov context")?;
        if !(beta > 0.0 && delta > 0.0) {
            return Err(Error::MetricParams(format!(
                "beta and delta must be positive (beta={beta}, delta={delta})"
            )));
        }
        let lam = &eigen.values;
        let k = lam.len();
        let m = DMatrix::from_fn(k, k, |i, j| {
            1.0 / beta - 2.0 / delta + (lam[j] / lam[i] + lam[i] / lam[j]) / delta
        });
        if let Some(bad) = m.iter().find(|&&x| x <= 0.0 || !x.is_finite()) {
            return Err(Error::Invariant(format!("lyapunov divisor entry {bad:e} is not positive")));
        }
        let p = eigen.reconstruct();
        let p_inv = eigen.map(|x| 1.0 / x);
        Ok(Self {
            eigen,
            m,
            beta,
            delta,
            p,
            p_inv,
        })
    }

    pub fn apply(&self, x: &Mat<T>) -> Mat<T> {
        x.scale(1.0 / self.beta - 2.0 / self.delta)
            + (&self.p_inv * x * &self.p + &self.p * x * &self.p_inv).scale(1.0 / self.delta)
    }

    /// `ℒ(P)⁻¹Z = C{(CᵗZC) / M}Cᵗ`.
    pub fn solve(&self, z: &Mat<T>) -> Mat<T> {
        let c = &self.eigen.vectors;
        let mut w = c.adjoint() * z * c;
        for j in 0..w.ncols() {
            for i in 0..w.nrows() {
                w[(i, j)] = w[(i, j)].unscale(self.m[(i, j)]);
            }
        }
        c * w * c.adjoint()
    }
}
