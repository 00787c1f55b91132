use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{orthonormality_residual, real_diag, thin_svd, Mat};
use crate::scalar::Scalar;
use crate::vector::AmbientVector;

use super::Point;

/// Rank threshold used by [`factorize`]: `σ_p / σ_1 > RANK_TOL`.
pub const RANK_TOL: f64 = 1e-10;

fn check_group_element<T: Scalar>(o: &Mat<T>, p: usize) -> Result<()> {
    if o.shape() != (p, p) {
        return Err(Error::Shape {
            context: "group element",
            expected: (p, p),
            got: o.shape(),
        });
    }
    let residual = orthonormality_residual(o);
    if residual > 1e-10 {
        return Err(Error::NotOrthonormal {
            context: "group element",
            residual,
        });
    }
    Ok(())
}

/// `(U, P, V) ↦ (UOᵗ, OPOᵗ, VOᵗ)`, which leaves `UPVᵗ` unchanged.
pub fn group_act<T: Scalar>(o: &Mat<T>, y: &Point<T>) -> Result<Point<T>> {
    check_group_element(o, y.p().nrows())?;
    let ot = o.adjoint();
    Point::new(y.u() * &ot, o * y.p() * &ot, y.v() * &ot)
}

/// Differential of [`group_act`]: `(ω_UOᵗ, Oω_POᵗ, ω_VOᵗ)`.
pub fn group_act_tangent<T: Scalar>(o: &Mat<T>, w: &AmbientVector<T>) -> Result<AmbientVector<T>> {
    check_group_element(o, w.p.nrows())?;
    let ot = o.adjoint();
    Ok(AmbientVector::new(&w.u * &ot, o * &w.p * &ot, &w.v * &ot))
}

/// `UPVᵗ`.
pub fn embed<T: Scalar>(y: &Point<T>) -> Mat<T> {
    y.u() * y.p() * y.v().adjoint()
}

/// Rank-`p` truncated SVD `F ≈ U Σ Vᵗ` as a point with diagonal `P = Σ`.
pub fn factorize<T: Scalar>(f: &Mat<T>, p: usize) -> Result<Point<T>> {
    let (m, n) = f.shape();
    if p == 0 || p > m.min(n) {
        return Err(Error::Dimensions(format!("rank {p} must be in 1..=min({m}, {n})")));
    }
    let svd = thin_svd(f)?;
    let sigma = &svd.singular_values;
    let ratio = if sigma[0] > 0.0 { sigma[p - 1] / sigma[0] } else { 0.0 };
    if !(ratio > RANK_TOL) {
        return Err(Error::RankDeficient { p, ratio });
    }
    let u = svd.u.columns(0, p).into_owned();
    let v = svd.v.columns(0, p).into_owned();
    let s = DVector::from_iterator(p, sigma.iter().take(p).copied());
    Point::new(u, real_diag(&s), v)
}

/// Singular values of `F` in descending order.
pub fn singular_values<T: Scalar>(f: &Mat<T>) -> Result<DVector<f64>> {
    Ok(thin_svd(f)?.singular_values)
}
