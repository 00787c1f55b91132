use crate::error::{Error, Result};
use crate::linalg::{asym_part, sym_part, Mat};
use crate::manifolds::TANGENCY_TOL;
use crate::scalar::Scalar;
use crate::vector::{AmbientVector, NCoordinates};

use super::{MetricParams, Point};

/// Largest of `‖Uᵗω_U + ω_UᵗU‖`, `‖ω_P − ω_Pᵗ‖`, `‖Vᵗω_V + ω_VᵗV‖`.
pub fn tangent_residual<T: Scalar>(y: &Point<T>, w: &AmbientVector<T>) -> f64 {
    let skew_residual = |base: &Mat<T>, x: &Mat<T>| {
        let a = base.adjoint() * x;
        (&a + a.adjoint()).norm()
    };
    let sym = (&w.p - w.p.adjoint()).norm();
    skew_residual(y.u(), &w.u).max(sym).max(skew_residual(y.v(), &w.v))
}

/// Projection onto the tangent space of the total space, orthogonal for
/// `⟨·,·⟩_ℰ`: `(ω_U − U sym(Uᵗω_U), sym(ω_P), ω_V − V sym(Vᵗω_V))`.
pub fn project_tangent<T: Scalar>(y: &Point<T>, w: &AmbientVector<T>) -> Result<AmbientVector<T>> {
    y.check_vector(w, "project_tangent")?;
    let (u, v) = (y.u(), y.v());
    Ok(AmbientVector::new(
        &w.u - u * sym_part(&(u.adjoint() * &w.u)),
        sym_part(&w.p),
        &w.v - v * sym_part(&(v.adjoint() * &w.v)),
    ))
}

/// Absolute residual accepted regardless of the vector norm: the rounding
/// level of products with unit-norm Stiefel factors.
const TANGENCY_FLOOR: f64 = 1e-14;

pub(crate) fn require_tangent<T: Scalar>(
    y: &Point<T>,
    w: &AmbientVector<T>,
    context: &'static str,
) -> Result<()> {
    y.check_vector(w, context)?;
    let residual = tangent_residual(y, w);
    if residual <= TANGENCY_TOL * w.norm() + TANGENCY_FLOOR {
        Ok(())
    } else {
        Err(Error::NotTangent { context, residual })
    }
}

/// Tangent vector along the group orbit generated by the 𝔱-antisymmetric
/// `q`: `(Uq, Pq − qP, Vq)`, the derivative of the action by `exp(−tq)`.
pub fn vertical_lift<T: Scalar>(y: &Point<T>, q: &Mat<T>) -> Result<AmbientVector<T>> {
    let k = y.p().nrows();
    if q.shape() != (k, k) {
        return Err(Error::Shape {
            context: "vertical_lift",
            expected: (k, k),
            got: q.shape(),
        });
    }
    let residual = if q.norm() == 0.0 {
        0.0
    } else {
        (q + q.adjoint()).norm() / q.norm()
    };
    if residual > TANGENCY_TOL {
        return Err(Error::NotAntisymmetric {
            context: "vertical_lift",
            residual,
        });
    }
    let p = y.p();
    Ok(AmbientVector::new(y.u() * q, p * q - q * p, y.v() * q))
}

/// `α₁Uᵗω_U + γ₁Vᵗω_V + β(ω_PP⁻¹ − P⁻¹ω_P)`; vanishes exactly on the
/// horizontal space.
pub fn horizontal_residual<T: Scalar>(
    y: &Point<T>,
    w: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<Mat<T>> {
    y.check_vector(w, "horizontal_residual")?;
    let pinv = y.p_inv();
    Ok((y.u().adjoint() * &w.u).scale(params.alpha1)
        + (y.v().adjoint() * &w.v).scale(params.gamma1)
        + (&w.p * pinv - pinv * &w.p).scale(params.beta))
}

/// Injective parametrization of the horizontal space:
/// `U{−γ₁D⁻ + δ⁻¹(P⁻¹D⁺ − D⁺P⁻¹)} + U₀B`, `β⁻¹D⁺`,
/// `V{α₁D⁻ + δ⁻¹(P⁻¹D⁺ − D⁺P⁻¹)} + V₀C`.
pub fn n_apply<T: Scalar>(
    y: &Point<T>,
    x: &NCoordinates<T>,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    let (m, n, p) = y.dims();
    for (got, expected) in [
        (x.b.shape(), (m - p, p)),
        (x.d.shape(), (p, p)),
        (x.c.shape(), (n - p, p)),
    ] {
        if got != expected {
            return Err(Error::Shape {
                context: "n_apply",
                expected,
                got,
            });
        }
    }
    let d_plus = sym_part(&x.d);
    let d_minus = asym_part(&x.d);
    let pinv = y.p_inv();
    let comm = (pinv * &d_plus - &d_plus * pinv).scale(1.0 / params.delta());
    let wu = y.u() * (&comm - d_minus.scale(params.gamma1)) + y.u_perp() * &x.b;
    let wv = y.v() * (&comm + d_minus.scale(params.alpha1)) + y.v_perp() * &x.c;
    Ok(AmbientVector::new(wu, d_plus.scale(1.0 / params.beta), wv))
}

/// Adjoint of [`n_apply`] between `⟨·,·⟩_ℰ` and the trace pairing on ℰ_N.
pub fn n_adjoint<T: Scalar>(
    y: &Point<T>,
    w: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<NCoordinates<T>> {
    y.check_vector(w, "n_adjoint")?;
    let pinv = y.p_inv();
    let xu = y.u().adjoint() * &w.u;
    let xv = y.v().adjoint() * &w.v;
    let inv_delta = 1.0 / params.delta();
    let sym_arg = w.p.scale(1.0 / params.beta)
        + (pinv * &xu - &xu * pinv + pinv * &xv - &xv * pinv).scale(inv_delta);
    let d = sym_part(&sym_arg) - asym_part(&xu).scale(params.gamma1)
        + asym_part(&xv).scale(params.alpha1);
    Ok(NCoordinates::new(
        y.u_perp().adjoint() * &w.u,
        d,
        y.v_perp().adjoint() * &w.v,
    ))
}

/// Intermediate quantities of the horizontal projection of `ω`.
pub(crate) struct ProjectionParts<T: Scalar> {
    pub xu: Mat<T>,
    pub xv: Mat<T>,
    pub d_minus: Mat<T>,
    pub d_plus: Mat<T>,
    /// `P⁻¹D⁺ − D⁺P⁻¹`.
    pub comm: Mat<T>,
}

pub(crate) fn projection_parts<T: Scalar>(
    y: &Point<T>,
    w: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<ProjectionParts<T>> {
    let lyap = y.lyapunov(params)?;
    let (p, pinv) = (y.p(), y.p_inv());
    let inv_delta = 1.0 / params.delta();
    let xu = y.u().adjoint() * &w.u;
    let xv = y.v().adjoint() * &w.v;
    let d_minus = asym_part(&(&xv - &xu)).scale(inv_delta);
    let rhs = sym_part(
        &(&w.p
            + (&xu * p - p * &xu).scale(params.alpha1 * inv_delta)
            + (&xv * p - p * &xv).scale(params.gamma1 * inv_delta)),
    );
    let d_plus = lyap.solve(&rhs);
    let comm = pinv * &d_plus - &d_plus * pinv;
    Ok(ProjectionParts {
        xu,
        xv,
        d_minus,
        d_plus,
        comm,
    })
}

/// The g-orthogonal projection `Π_g = N(NᵗgN)⁻¹Nᵗg` onto the horizontal
/// space, evaluated in closed form. Accepts any ambient vector.
pub fn project_horizontal<T: Scalar>(
    y: &Point<T>,
    w: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    y.check_vector(w, "project_horizontal")?;
    let parts = projection_parts(y, w, params)?;
    let inv_delta = 1.0 / params.delta();
    let (u, v) = (y.u(), y.v());
    let wu = u * (parts.comm.scale(inv_delta) - parts.d_minus.scale(params.gamma1) - &parts.xu) + &w.u;
    let wv = v * (parts.comm.scale(inv_delta) + parts.d_minus.scale(params.alpha1) - &parts.xv) + &w.v;
    Ok(AmbientVector::new(wu, parts.d_plus.scale(1.0 / params.beta), wv))
}

/// Relative horizontality defect: `‖residual‖ / ‖ω‖` plus the relative
/// tangency defect, whichever is larger.
pub fn horizontal_defect<T: Scalar>(
    y: &Point<T>,
    w: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<f64> {
    let scale = w.norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let h = horizontal_residual(y, w, params)?.norm();
    let t = tangent_residual(y, w);
    let weight = params.alpha1.max(params.gamma1).max(params.beta * y.p_inv().norm());
    Ok((h / weight).max(t) / scale)
}
