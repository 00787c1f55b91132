use crate::error::Result;
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::vector::AmbientVector;

use super::{MetricParams, Point};

/// `g ω = [α₀ω_U + (α₁−α₀)UUᵗω_U, βP⁻¹ω_PP⁻¹, γ₀ω_V + (γ₁−γ₀)VVᵗω_V]`.
pub fn metric_apply<T: Scalar>(
    y: &Point<T>,
    w: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    y.check_vector(w, "metric_apply")?;
    let pinv = y.p_inv();
    Ok(AmbientVector::new(
        weighted(y.u(), &w.u, params.alpha0, params.alpha1),
        (pinv * &w.p * pinv).scale(params.beta),
        weighted(y.v(), &w.v, params.gamma0, params.gamma1),
    ))
}

/// Inverse of [`metric_apply`]: the Stiefel weights are inverted and the P
/// slot becomes `β⁻¹Pω_PP`.
pub fn metric_inverse_apply<T: Scalar>(
    y: &Point<T>,
    w: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    y.check_vector(w, "metric_inverse_apply")?;
    let p = y.p();
    Ok(AmbientVector::new(
        weighted(y.u(), &w.u, 1.0 / params.alpha0, 1.0 / params.alpha1),
        (p * &w.p * p).scale(1.0 / params.beta),
        weighted(y.v(), &w.v, 1.0 / params.gamma0, 1.0 / params.gamma1),
    ))
}

/// `c₀ω + (c₁ − c₀)BBᵗω`.
fn weighted<T: Scalar>(base: &Mat<T>, w: &Mat<T>, c0: f64, c1: f64) -> Mat<T> {
    w.scale(c0) + (base * (base.adjoint() * w)).scale(c1 - c0)
}

/// `⟨a, g b⟩_ℰ`.
pub fn metric_inner<T: Scalar>(
    y: &Point<T>,
    a: &AmbientVector<T>,
    b: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<f64> {
    y.check_vector(a, "metric_inner")?;
    Ok(a.inner(&metric_apply(y, b, params)?))
}

pub fn metric_norm<T: Scalar>(y: &Point<T>, a: &AmbientVector<T>, params: &MetricParams) -> Result<f64> {
    Ok(metric_inner(y, a, a, params)?.max(0.0).sqrt())
}

/// Directional derivative `(D_ξ g) ω` of the metric operator:
/// `[(α₁−α₀)(ξ_UUᵗ + Uξ_Uᵗ)ω_U, −β(P⁻¹ξ_PP⁻¹ω_PP⁻¹ + P⁻¹ω_PP⁻¹ξ_PP⁻¹), (γ₁−γ₀)(ξ_VVᵗ + Vξ_Vᵗ)ω_V]`.
pub fn metric_deriv<T: Scalar>(
    y: &Point<T>,
    xi: &AmbientVector<T>,
    w: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    y.check_vector(xi, "metric_deriv direction")?;
    y.check_vector(w, "metric_deriv argument")?;
    let (u, v, pinv) = (y.u(), y.v(), y.p_inv());
    let du = (&xi.u * (u.adjoint() * &w.u) + u * (xi.u.adjoint() * &w.u))
        .scale(params.alpha1 - params.alpha0);
    let a = pinv * &xi.p * pinv;
    let b = pinv * &w.p * pinv;
    let dp = (&a * &w.p * pinv + &b * &xi.p * pinv).scale(-params.beta);
    let dv = (&xi.v * (v.adjoint() * &w.v) + v * (xi.v.adjoint() * &w.v))
        .scale(params.gamma1 - params.gamma0);
    Ok(AmbientVector::new(du, dp, dv))
}
