use crate::error::{Error, Result};
use crate::linalg::{eig_tsym, require_pd, symmetry_residual, sym_part, Mat, TSymEigen};
use crate::scalar::Scalar;

use super::FEASIBILITY_TOL;

/// A 𝔱-symmetric positive-definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdPoint<T: Scalar>(Mat<T>);

impl<T: Scalar> SpdPoint<T> {
    pub fn new(p: Mat<T>) -> Result<Self> {
        let eig = eig_tsym(&p)?;
        require_pd(&eig, "spd point")?;
        Ok(Self(sym_part(&p)))
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.0
    }

    pub fn into_inner(self) -> Mat<T> {
        self.0
    }
}

/// `P^{1/2} exp(t P^{-1/2} η P^{-1/2}) P^{1/2}`.
pub fn spd_geodesic<T: Scalar>(p: &Mat<T>, eta: &Mat<T>, t: f64) -> Result<SpdPoint<T>> {
    let eig = eig_tsym(p)?;
    require_pd(&eig, "spd geodesic")?;
    spd_geodesic_from_eigen(&eig, eta, t)
}

pub fn spd_geodesic_from_eigen<T: Scalar>(
    eig: &TSymEigen<T>,
    eta: &Mat<T>,
    t: f64,
) -> Result<SpdPoint<T>> {
    let residual = symmetry_residual(eta);
    if residual > FEASIBILITY_TOL {
        return Err(Error::NotSymmetric {
            context: "spd geodesic velocity",
            residual,
        });
    }
    let half = eig.map(f64::sqrt);
    let inv_half = eig.map(|x| 1.0 / x.sqrt());
    let inner = sym_part(&(&inv_half * eta * &inv_half)).scale(t);
    let expo = eig_tsym(&inner)?.map(f64::exp);
    Ok(SpdPoint(sym_part(&(&half * expo * &half))))
}
