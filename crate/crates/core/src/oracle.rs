//! Independent reference computations used by the verification suite.
//!
//! Nothing here is on the path of the closed-form geometry: the projection
//! oracle solves the Gram system of an explicit horizontal basis, the
//! Stiefel geodesic oracle integrates the geodesic ODE numerically, and the
//! finite-difference curve uses a retraction rather than the geodesic.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{eig_tsym, polar_factor, sym_part, Mat};
use crate::manifolds::stiefel_geodesic_accel;
use crate::quotient::{dproj, metric_apply, n_apply, project_horizontal, MetricParams, Point, VectorField};
use crate::scalar::Scalar;
use crate::vector::{AmbientVector, NCoordinates};

/// g-orthogonal projection onto the horizontal space computed from an
/// explicit basis: images of the canonical ℰ_N basis under `N`, then the
/// Gram system `G c = (⟨h_k, gω⟩_ℰ)_k`.
pub fn projection_by_basis<T: Scalar>(
    y: &Point<T>,
    w: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    let (m, n, p) = y.dims();
    let dim = NCoordinates::<T>::zeros(m, n, p).real_dim();
    let basis: Vec<AmbientVector<T>> = (0..dim)
        .map(|k| n_apply(y, &NCoordinates::basis(m, n, p, k), params))
        .collect::<Result<_>>()?;
    let lowered: Vec<AmbientVector<T>> = basis
        .iter()
        .map(|h| metric_apply(y, h, params))
        .collect::<Result<_>>()?;
    let gram = DMatrix::from_fn(dim, dim, |i, j| basis[i].inner(&lowered[j]));
    let gram = (&gram + gram.transpose()).scale(0.5);
    let gw = metric_apply(y, w, params)?;
    let rhs = DVector::from_iterator(dim, basis.iter().map(|h| h.inner(&gw)));
    let coeffs = gram
        .cholesky()
        .ok_or_else(|| Error::Invariant("horizontal Gram matrix is not positive definite".into()))?
        .solve(&rhs);
    let mut out = w.zeros_like();
    for (c, h) in coeffs.iter().zip(&basis) {
        out.axpy(*c, h);
    }
    Ok(out)
}

/// Numerical solution at time `t` of the Stiefel geodesic equation for the
/// metric with ratio `a = α₁/α₀`, by adaptive Dormand–Prince 5(4)
/// integration with absolute tolerance `tol` on the state `(γ, γ')`.
pub fn stiefel_geodesic_ode<T: Scalar>(u: &Mat<T>, eta: &Mat<T>, t: f64, a: f64, tol: f64) -> Mat<T> {
    if t == 0.0 {
        return u.clone();
    }
    let rhs = |s: &(Mat<T>, Mat<T>)| (s.1.clone(), stiefel_geodesic_accel(&s.0, &s.1, a));
    let (gamma, _) = integrate_dopri5(rhs, (u.clone(), eta.clone()), t, tol);
    gamma
}

type Pair<T> = (Mat<T>, Mat<T>);

fn lin<T: Scalar>(base: &Pair<T>, terms: &[(f64, &Pair<T>)]) -> Pair<T> {
    let mut out = base.clone();
    for (c, k) in terms {
        if *c != 0.0 {
            out.0 += k.0.scale(*c);
            out.1 += k.1.scale(*c);
        }
    }
    out
}

fn integrate_dopri5<T: Scalar>(
    f: impl Fn(&Pair<T>) -> Pair<T>,
    y0: Pair<T>,
    t_end: f64,
    tol: f64,
) -> Pair<T> {
    const C2: f64 = 1.0 / 5.0;
    const A21: f64 = 1.0 / 5.0;
    const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
    const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
    const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
    const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
    const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let _ = C2;
    let sign = t_end.signum();
    let total = t_end.abs();
    let mut y = y0;
    let mut t = 0.0;
    let mut h = (total / 64.0).min(0.01);
    let mut k1 = f(&y);
    while t < total {
        if t + h > total {
            h = total - t;
        }
        let hs = h * sign;
        let k2 = f(&lin(&y, &[(hs * A21, &k1)]));
        let k3 = f(&lin(&y, &[(hs * A3[0], &k1), (hs * A3[1], &k2)]));
        let k4 = f(&lin(&y, &[(hs * A4[0], &k1), (hs * A4[1], &k2), (hs * A4[2], &k3)]));
        let k5 = f(&lin(
            &y,
            &[(hs * A5[0], &k1), (hs * A5[1], &k2), (hs * A5[2], &k3), (hs * A5[3], &k4)],
        ));
        let k6 = f(&lin(
            &y,
            &[
                (hs * A6[0], &k1),
                (hs * A6[1], &k2),
                (hs * A6[2], &k3),
                (hs * A6[3], &k4),
                (hs * A6[4], &k5),
            ],
        ));
        let next = lin(
            &y,
            &[(hs * B[0], &k1), (hs * B[2], &k3), (hs * B[3], &k4), (hs * B[4], &k5), (hs * B[5], &k6)],
        );
        let k7 = f(&next);
        let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
        let mut err0 = Mat::<T>::zeros(y.0.nrows(), y.0.ncols());
        let mut err1 = err0.clone();
        for (e, k) in E.iter().zip(ks) {
            err0 += k.0.scale(hs * e);
            err1 += k.1.scale(hs * e);
        }
        let scale = 1.0 + next.0.camax().max(next.1.camax());
        let err = err0.camax().max(err1.camax()) / (tol * scale);
        if err <= 1.0 {
            t += h;
            y = next;
            k1 = k7;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9_f64 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < 1e-14 * total.max(1.0) {
            break;
        }
    }
    y
}

/// Curve through `y` with velocity `xi` at `t = 0` used by finite-difference
/// oracles: polar retraction on the Stiefel factors and a symmetrized
/// additive step with an eigenvalue floor on the positive-definite factor.
pub fn fd_curve<T: Scalar>(y: &Point<T>, xi: &AmbientVector<T>, t: f64) -> Result<Point<T>> {
    let u = polar_factor(&(y.u() + xi.u.scale(t)))?;
    let v = polar_factor(&(y.v() + xi.v.scale(t)))?;
    let p = sym_part(&(y.p() + xi.p.scale(t)));
    let eig = eig_tsym(&p)?;
    let floor = 1e-8 * eig.max().abs().max(1e-300);
    let p = if eig.min() > floor { p } else { sym_part(&eig.map(|x| x.max(floor))) };
    Point::new(u, p, v)
}

/// Central difference `(F(c(h)) − F(c(−h))) / 2h` of an ambient-valued map
/// along [`fd_curve`].
pub fn central_difference<T: Scalar>(
    y: &Point<T>,
    xi: &AmbientVector<T>,
    h: f64,
    mut f: impl FnMut(&Point<T>) -> Result<AmbientVector<T>>,
) -> Result<AmbientVector<T>> {
    let fwd = f(&fd_curve(y, xi, h)?)?;
    let bwd = f(&fd_curve(y, xi, -h)?)?;
    Ok((fwd - bwd).scale(0.5 / h))
}

/// Scalar version of [`central_difference`].
pub fn central_difference_scalar<T: Scalar>(
    y: &Point<T>,
    xi: &AmbientVector<T>,
    h: f64,
    mut f: impl FnMut(&Point<T>) -> Result<f64>,
) -> Result<f64> {
    let fwd = f(&fd_curve(y, xi, h)?)?;
    let bwd = f(&fd_curve(y, xi, -h)?)?;
    Ok((fwd - bwd) / (2.0 * h))
}

/// Horizontal test field `Y ↦ Π_g(Y) ω(Y)` with the quadratic ambient part
/// `ω(Y) = ω₀ + [S_U U P, P R P, S_V V P]`, whose derivative is known in
/// closed form.
#[derive(Debug, Clone)]
pub struct PolynomialField<T: Scalar> {
    pub constant: AmbientVector<T>,
    pub s_u: Mat<T>,
    pub r: Mat<T>,
    pub s_v: Mat<T>,
    pub params: MetricParams,
}

impl<T: Scalar> PolynomialField<T> {
    fn ambient(&self, y: &Point<T>) -> AmbientVector<T> {
        let (u, p, v) = (y.u(), y.p(), y.v());
        &self.constant
            + &AmbientVector::new(&self.s_u * u * p, p * &self.r * p, &self.s_v * v * p)
    }

    fn ambient_derivative(&self, y: &Point<T>, xi: &AmbientVector<T>) -> AmbientVector<T> {
        let (u, p, v) = (y.u(), y.p(), y.v());
        AmbientVector::new(
            &self.s_u * (&xi.u * p + u * &xi.p),
            &xi.p * &self.r * p + p * &self.r * &xi.p,
            &self.s_v * (&xi.v * p + v * &xi.p),
        )
    }
}

impl<T: Scalar> VectorField<T> for PolynomialField<T> {
    fn value(&self, y: &Point<T>) -> Result<AmbientVector<T>> {
        project_horizontal(y, &self.ambient(y), &self.params)
    }

    fn derivative(&self, y: &Point<T>, xi: &AmbientVector<T>) -> Result<AmbientVector<T>> {
        let w = self.ambient(y);
        Ok(dproj(y, xi, &w, &self.params)?
            + project_horizontal(y, &self.ambient_derivative(y, xi), &self.params)?)
    }
}
