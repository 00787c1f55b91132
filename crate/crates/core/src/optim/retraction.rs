use crate::error::Result;
use crate::linalg::{orthonormality_residual, polar_factor};
use crate::manifolds::spd_geodesic_from_eigen;
use crate::quotient::{geodesic, MetricParams, Point};
use crate::scalar::Scalar;
use crate::vector::AmbientVector;

use super::Retraction;

/// Feasibility drift above which an iterate is re-orthonormalized.
const REFEASIBILIZE_TOL: f64 = 1e-10;

/// Move from `y` along the horizontal vector `eta`.
pub fn retract<T: Scalar>(
    y: &Point<T>,
    eta: &AmbientVector<T>,
    kind: Retraction,
    params: &MetricParams,
) -> Result<Point<T>> {
    let next = match kind {
        Retraction::Geodesic => geodesic(y, eta, 1.0, params)?,
        Retraction::Polar => {
            let u = polar_factor(&(y.u() + &eta.u))?;
            let v = polar_factor(&(y.v() + &eta.v))?;
            let p = spd_geodesic_from_eigen(y.p_eigen(), &eta.p, 1.0)?;
            Point::new(u, p.into_inner(), v)?
        }
    };
    if orthonormality_residual(next.u()).max(orthonormality_residual(next.v())) > REFEASIBILIZE_TOL {
        return Point::new(polar_factor(next.u())?, next.p().clone(), polar_factor(next.v())?);
    }
    Ok(next)
}
