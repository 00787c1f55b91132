use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{
    complement_basis, eig_tsym, orthonormality_residual, require_pd, symmetry_residual, sym_part,
    Mat, TSymEigen,
};
use crate::manifolds::{LyapunovContext, FEASIBILITY_TOL};
use crate::scalar::Scalar;
use crate::vector::AmbientVector;

use super::MetricParams;

/// A representative `(U, P, V)` of the class `⟦U, P, V⟧`.
///
/// The eigendecomposition and inverse of `P` are computed on construction;
/// the complement bases `U₀`, `V₀` are computed on first use. A point is
/// immutable afterwards.
#[derive(Debug, Clone)]
pub struct Point<T: Scalar> {
    coords: AmbientVector<T>,
    p_eigen: TSymEigen<T>,
    p_inv: Mat<T>,
    u_perp: OnceLock<Mat<T>>,
    v_perp: OnceLock<Mat<T>>,
}

impl<T: Scalar> Point<T> {
    pub fn new(u: Mat<T>, p: Mat<T>, v: Mat<T>) -> Result<Self> {
        let k = p.nrows();
        if !p.is_square() || u.ncols() != k || v.ncols() != k {
            return Err(Error::Dimensions(format!(
                "incompatible factor shapes U {:?}, P {:?}, V {:?}",
                u.shape(),
                p.shape(),
                v.shape()
            )));
        }
        if k == 0 || k > u.nrows() || k > v.nrows() {
            return Err(Error::Dimensions(format!(
                "rank {k} must be in 1..=min(m={}, n={})",
                u.nrows(),
                v.nrows()
            )));
        }
        for (mat, context) in [(&u, "point U factor"), (&v, "point V factor")] {
            let residual = orthonormality_residual(mat);
            if residual > FEASIBILITY_TOL {
                return Err(Error::NotOrthonormal { context, residual });
            }
        }
        let p = sym_part(&{
            let residual = symmetry_residual(&p);
            if residual > FEASIBILITY_TOL {
                return Err(Error::NotSymmetric {
                    context: "point P factor",
                    residual,
                });
            }
            p
        });
        let p_eigen = eig_tsym(&p)?;
        require_pd(&p_eigen, "point P factor")?;
        let p_inv = sym_part(&p_eigen.map(|x| 1.0 / x));
        Ok(Self {
            coords: AmbientVector::new(u, p, v),
            p_eigen,
            p_inv,
            u_perp: OnceLock::new(),
            v_perp: OnceLock::new(),
        })
    }

    pub fn from_coords(coords: AmbientVector<T>) -> Result<Self> {
        Self::new(coords.u, coords.p, coords.v)
    }

    /// `(m, n, p)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        self.coords.dims()
    }

    pub fn u(&self) -> &Mat<T> {
        &self.coords.u
    }

    pub fn p(&self) -> &Mat<T> {
        &self.coords.p
    }

    pub fn v(&self) -> &Mat<T> {
        &self.coords.v
    }

    pub fn p_inv(&self) -> &Mat<T> {
        &self.p_inv
    }

    pub fn p_eigen(&self) -> &TSymEigen<T> {
        &self.p_eigen
    }

    /// The representative as an element of ℰ.
    pub fn coords(&self) -> &AmbientVector<T> {
        &self.coords
    }

    pub fn u_perp(&self) -> &Mat<T> {
        self.u_perp.get_or_init(|| complement_basis(&self.coords.u))
    }

    pub fn v_perp(&self) -> &Mat<T> {
        self.v_perp.get_or_init(|| complement_basis(&self.coords.v))
    }

    pub fn lyapunov(&self, params: &MetricParams) -> Result<LyapunovContext<T>> {
        LyapunovContext::from_eigen(self.p_eigen.clone(), params.beta, params.delta())
    }

    pub fn zero_vector(&self) -> AmbientVector<T> {
        let (m, n, p) = self.dims();
        AmbientVector::zeros(m, n, p)
    }

    pub fn check_vector(&self, w: &AmbientVector<T>, context: &'static str) -> Result<()> {
        let (m, n, p) = self.dims();
        w.check_dims(m, n, p, context)
    }

    /// Largest of the U/V orthonormality residuals and the P symmetry residual.
    pub fn feasibility_residual(&self) -> f64 {
        orthonormality_residual(self.u())
            .max(orthonormality_residual(self.v()))
            .max(symmetry_residual(self.p()))
    }
}
