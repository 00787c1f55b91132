use crate::error::Result;
use crate::manifolds::{spd_geodesic_from_eigen, stiefel_geodesic_with_complement};
use crate::scalar::Scalar;
use crate::vector::AmbientVector;

use super::horizontal::require_tangent;
use super::{MetricParams, Point};

/// Geodesic of the total space through `y` with initial velocity `eta`.
///
/// The metric is a product, so each factor follows its own geodesic: the
/// Stiefel factors for the `(α₀, α₁)` and `(γ₀, γ₁)` metrics and the
/// positive-definite factor along `P^{1/2} exp(t P^{-1/2}η_P P^{-1/2}) P^{1/2}`.
/// A horizontal `eta` gives a horizontal geodesic, i.e. a geodesic of the
/// quotient.
pub fn geodesic<T: Scalar>(
    y: &Point<T>,
    eta: &AmbientVector<T>,
    t: f64,
    params: &MetricParams,
) -> Result<Point<T>> {
    require_tangent(y, eta, "geodesic velocity")?;
    let u = stiefel_geodesic_with_complement(
        y.u(),
        y.u_perp(),
        &eta.u,
        t,
        params.alpha1 / params.alpha0,
    )?;
    let p = spd_geodesic_from_eigen(y.p_eigen(), &eta.p, t)?;
    let v = stiefel_geodesic_with_complement(
        y.v(),
        y.v_perp(),
        &eta.v,
        t,
        params.gamma1 / params.gamma0,
    )?;
    Point::new(u.into_inner(), p.into_inner(), v.into_inner())
}
