//! Second-order geometry: derivative of the horizontal projection,
//! Christoffel terms, Levi-Civita connection, gradient and Hessian.

use crate::error::Result;
use crate::linalg::{asym_part, sym_part};
use crate::scalar::Scalar;
use crate::vector::AmbientVector;

use super::horizontal::{projection_parts, require_tangent};
use super::metric::{metric_apply, metric_deriv, metric_inverse_apply};
use super::{project_horizontal, MetricParams, Point};

/// `(D_ξ Π_g) ω` with `ω` held fixed as an ambient vector.
pub fn dproj<T: Scalar>(
    y: &Point<T>,
    xi: &AmbientVector<T>,
    w: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    require_tangent(y, xi, "dproj direction")?;
    y.check_vector(w, "dproj argument")?;
    let parts = projection_parts(y, w, params)?;
    let lyap = y.lyapunov(params)?;
    let (u, p, v, pinv) = (y.u(), y.p(), y.v(), y.p_inv());
    let (a1, g1) = (params.alpha1, params.gamma1);
    let inv_delta = 1.0 / params.delta();
    let xp = &xi.p;

    let dxu = xi.u.adjoint() * &w.u;
    let dxv = xi.v.adjoint() * &w.v;
    let d_minus_dot = asym_part(&(&dxv - &dxu)).scale(inv_delta);
    let dpinv = -(pinv * xp * pinv);

    // ℒ(P)D⁺ = R  ⇒  ℒ(P)(D_ξD⁺) = D_ξR − (D_ξℒ)D⁺.
    let (xu, xv, dp) = (&parts.xu, &parts.xv, &parts.d_plus);
    let r_dot = sym_part(
        &((&dxu * p + xu * xp - xp * xu - p * &dxu).scale(a1 * inv_delta)
            + (&dxv * p + xv * xp - xp * xv - p * &dxv).scale(g1 * inv_delta)),
    );
    let l_dot = (&dpinv * dp * p + pinv * dp * xp + xp * dp * pinv + p * dp * &dpinv).scale(inv_delta);
    let d_plus_dot = lyap.solve(&(r_dot - l_dot));
    let comm_dot = &dpinv * dp + pinv * &d_plus_dot - &d_plus_dot * pinv - dp * &dpinv;

    let wu = parts.comm.scale(inv_delta) - parts.d_minus.scale(g1) - xu;
    let wv = parts.comm.scale(inv_delta) + parts.d_minus.scale(a1) - xv;
    let wu_dot = comm_dot.scale(inv_delta) - d_minus_dot.scale(g1) - &dxu;
    let wv_dot = comm_dot.scale(inv_delta) + d_minus_dot.scale(a1) - &dxv;
    Ok(AmbientVector::new(
        &xi.u * wu + u * wu_dot,
        d_plus_dot.scale(1.0 / params.beta),
        &xi.v * wv + v * wv_dot,
    ))
}

/// Christoffel metric term
/// `K(ξ, η) = [(α₁−α₀)(U sym(ηᵗξ) − (ηξᵗ + ξηᵗ)U), −β sym(P⁻¹ηP⁻¹ξP⁻¹), (γ₁−γ₀)(…)]`
/// for tangent `ξ`, `η`.
pub fn christoffel_k<T: Scalar>(
    y: &Point<T>,
    xi: &AmbientVector<T>,
    eta: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    require_tangent(y, xi, "christoffel_k first argument")?;
    require_tangent(y, eta, "christoffel_k second argument")?;
    let stiefel_term = |base: &crate::linalg::Mat<T>, x: &crate::linalg::Mat<T>, e: &crate::linalg::Mat<T>, c: f64| {
        (base * sym_part(&(e.adjoint() * x)) - (e * x.adjoint() + x * e.adjoint()) * base).scale(c)
    };
    let pinv = y.p_inv();
    Ok(AmbientVector::new(
        stiefel_term(y.u(), &xi.u, &eta.u, params.alpha1 - params.alpha0),
        sym_part(&(pinv * &eta.p * pinv * &xi.p * pinv)).scale(-params.beta),
        stiefel_term(y.v(), &xi.v, &eta.v, params.gamma1 - params.gamma0),
    ))
}

/// `Γ_c(ξ, η) = Π_g g⁻¹ K(ξ, η) − (D_ξ Π_g) η`.
pub fn gamma_c<T: Scalar>(
    y: &Point<T>,
    xi: &AmbientVector<T>,
    eta: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    let k = christoffel_k(y, xi, eta, params)?;
    let lifted = project_horizontal(y, &metric_inverse_apply(y, &k, params)?, params)?;
    Ok(lifted - dproj(y, xi, eta, params)?)
}

/// A horizontal vector field with a known directional derivative of its
/// ℰ-valued representation.
pub trait VectorField<T: Scalar> {
    fn value(&self, y: &Point<T>) -> Result<AmbientVector<T>>;

    /// `D_ξ(ıη)` at `y`.
    fn derivative(&self, y: &Point<T>, xi: &AmbientVector<T>) -> Result<AmbientVector<T>>;
}

/// The field `Y ↦ Π_g(Y) ω` for a fixed ambient `ω`.
#[derive(Debug, Clone)]
pub struct ProjectedField<T: Scalar> {
    pub ambient: AmbientVector<T>,
    pub params: MetricParams,
}

impl<T: Scalar> VectorField<T> for ProjectedField<T> {
    fn value(&self, y: &Point<T>) -> Result<AmbientVector<T>> {
        project_horizontal(y, &self.ambient, &self.params)
    }

    fn derivative(&self, y: &Point<T>, xi: &AmbientVector<T>) -> Result<AmbientVector<T>> {
        dproj(y, xi, &self.ambient, &self.params)
    }
}

/// `∇_ξ η = Π_g(D_ξ ıη + Γ_c(ξ, η))`.
pub fn levi_civita<T: Scalar, F: VectorField<T> + ?Sized>(
    y: &Point<T>,
    xi: &AmbientVector<T>,
    field: &F,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    let eta = field.value(y)?;
    let d_eta = field.derivative(y, xi)?;
    y.check_vector(&d_eta, "levi_civita field derivative")?;
    let gamma = gamma_c(y, xi, &eta, params)?;
    project_horizontal(y, &(d_eta + gamma), params)
}

/// `rgrad_f = Π_g g⁻¹ f̂_Y`.
pub fn rgrad<T: Scalar>(
    y: &Point<T>,
    egrad: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    project_horizontal(y, &metric_inverse_apply(y, egrad, params)?, params)
}

/// Gradient data reused across Hessian-vector products at one point.
#[derive(Debug, Clone)]
pub struct HessianContext<'a, T: Scalar> {
    pub point: &'a Point<T>,
    pub params: MetricParams,
    /// `g⁻¹ f̂_Y`.
    pub raised_egrad: AmbientVector<T>,
    /// `Π_g g⁻¹ f̂_Y`.
    pub rgrad: AmbientVector<T>,
}

impl<'a, T: Scalar> HessianContext<'a, T> {
    pub fn new(point: &'a Point<T>, egrad: &AmbientVector<T>, params: &MetricParams) -> Result<Self> {
        let raised_egrad = metric_inverse_apply(point, egrad, params)?;
        let rgrad = project_horizontal(point, &raised_egrad, params)?;
        Ok(Self {
            point,
            params: *params,
            raised_egrad,
            rgrad,
        })
    }

    /// `rhess¹¹_f ξ = Π_g g⁻¹(f̂_YYξ + g(D_ξΠ_g)(g⁻¹f̂_Y) − (D_ξg)(g⁻¹f̂_Y) + K(ξ, Π_g g⁻¹f̂_Y))`.
    pub fn apply(&self, xi: &AmbientVector<T>, ehess_xi: &AmbientVector<T>) -> Result<AmbientVector<T>> {
        let (y, params) = (self.point, &self.params);
        y.check_vector(ehess_xi, "rhess11 euclidean hessian")?;
        let mut acc = ehess_xi.clone();
        acc += &metric_apply(y, &dproj(y, xi, &self.raised_egrad, params)?, params)?;
        acc -= &metric_deriv(y, xi, &self.raised_egrad, params)?;
        acc += &christoffel_k(y, xi, &self.rgrad, params)?;
        project_horizontal(y, &metric_inverse_apply(y, &acc, params)?, params)
    }
}

/// Horizontal Riemannian Hessian applied to `ξ`, given `f̂_Y` and `f̂_YY ξ`.
pub fn rhess11<T: Scalar>(
    y: &Point<T>,
    xi: &AmbientVector<T>,
    egrad: &AmbientVector<T>,
    ehess_xi: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    HessianContext::new(y, egrad, params)?.apply(xi, ehess_xi)
}
