use crate::error::{Error, Result};
use crate::linalg::{
    asym_part, complement_basis, orthonormality_residual, polar_factor, sym_part, Mat,
};
use crate::scalar::Scalar;

use super::{FEASIBILITY_TOL, TANGENCY_TOL};

/// A matrix with 𝔱-orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct StiefelPoint<T: Scalar>(Mat<T>);

impl<T: Scalar> StiefelPoint<T> {
    pub fn new(u: Mat<T>) -> Result<Self> {
        if u.ncols() > u.nrows() {
            return Err(Error::Dimensions(format!(
                "stiefel point has more columns ({}) than rows ({})",
                u.ncols(),
                u.nrows()
            )));
        }
        let residual = orthonormality_residual(&u);
        if residual > FEASIBILITY_TOL {
            return Err(Error::NotOrthonormal {
                context: "stiefel point",
                residual,
            });
        }
        Ok(Self(u))
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.0
    }

    pub fn into_inner(self) -> Mat<T> {
        self.0
    }
}

fn check_same_shape<T: Scalar>(u: &Mat<T>, w: &Mat<T>, context: &'static str) -> Result<()> {
    if u.shape() == w.shape() {
        Ok(())
    } else {
        Err(Error::Shape {
            context,
            expected: u.shape(),
            got: w.shape(),
        })
    }
}

/// `ω − U sym(Uᵗω)`.
pub fn stiefel_tangent_project<T: Scalar>(u: &Mat<T>, w: &Mat<T>) -> Result<Mat<T>> {
    check_same_shape(u, w, "stiefel tangent projection")?;
    Ok(w - u * sym_part(&(u.adjoint() * w)))
}

/// `‖Uᵗη + ηᵗU‖`.
pub fn stiefel_tangent_residual<T: Scalar>(u: &Mat<T>, eta: &Mat<T>) -> f64 {
    let a = u.adjoint() * eta;
    (&a + a.adjoint()).norm()
}

/// Geodesic of the metric `α₀ tr(ωᵗω) + (α₁ − α₀) tr(ωᵗUUᵗω)`.
///
/// With `a = α₁/α₀`, `A = Uᵗη` and `(I − UUᵗ)η = QR`:
/// `γ(t) = [U Q] exp(t [[2aA, −Rᵗ], [R, 0]]) [I; 0] exp(t(1 − 2a)A)`.
pub fn stiefel_geodesic<T: Scalar>(
    u: &Mat<T>,
    eta: &Mat<T>,
    t: f64,
    alpha0: f64,
    alpha1: f64,
) -> Result<StiefelPoint<T>> {
    let u = StiefelPoint::new(u.clone())?.into_inner();
    let u0 = complement_basis(&u);
    stiefel_geodesic_with_complement(&u, &u0, eta, t, alpha1 / alpha0)
}

/// [`stiefel_geodesic`] with a precomputed complement basis and `a = α₁/α₀`.
pub fn stiefel_geodesic_with_complement<T: Scalar>(
    u: &Mat<T>,
    u0: &Mat<T>,
    eta: &Mat<T>,
    t: f64,
    a: f64,
) -> Result<StiefelPoint<T>> {
    check_same_shape(u, eta, "stiefel geodesic")?;
    let residual = stiefel_tangent_residual(u, eta);
    if residual > TANGENCY_TOL * eta.norm().max(1.0) {
        return Err(Error::NotTangent {
            context: "stiefel geodesic",
            residual,
        });
    }
    let p = u.ncols();
    let skew = asym_part(&(u.adjoint() * eta));
    let normal = u0.adjoint() * eta;
    let (q, r) = if u0.ncols() > p {
        let qr = normal.qr();
        (u0 * qr.q(), qr.r())
    } else {
        (u0.clone(), normal)
    };
    let k = r.nrows();
    let mut gen = Mat::<T>::zeros(p + k, p + k);
    gen.view_mut((0, 0), (p, p)).copy_from(&skew.scale(2.0 * a));
    gen.view_mut((0, p), (p, k)).copy_from(&(-r.adjoint()));
    gen.view_mut((p, 0), (k, p)).copy_from(&r);
    let flow = gen.scale(t).exp();
    let head = flow.columns(0, p);
    let tail = skew.scale(t * (1.0 - 2.0 * a)).exp();
    let mut gamma = (u * head.rows(0, p) + &q * head.rows(p, k)) * tail;
    if orthonormality_residual(&gamma) > 1e-10 {
        gamma = polar_factor(&gamma)?;
    }
    Ok(StiefelPoint(gamma))
}

/// Acceleration of the geodesic equation for `a = α₁/α₀`:
/// `γ'' = −2(a − 1)γ'A − γ(γ'ᵗγ' − 2(a − 1)A²)` with `A = γᵗγ'`.
pub fn stiefel_geodesic_accel<T: Scalar>(gamma: &Mat<T>, velocity: &Mat<T>, a: f64) -> Mat<T> {
    let skew = gamma.adjoint() * velocity;
    let c = 2.0 * (a - 1.0);
    let gram = velocity.adjoint() * velocity;
    -(velocity * &skew).scale(c) - gamma * (gram - (&skew * &skew).scale(c))
}
