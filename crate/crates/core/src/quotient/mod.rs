//! Geometry of the fixed-rank manifold as the quotient
//! `St(p,m) × S⁺(p) × St(p,n) / U(p)` under the five-parameter ambient metric.
//!
//! Tangent vectors of the quotient are represented by horizontal vectors at
//! a representative [`Point`]. Operations take the base point, ambient
//! vectors and the [`MetricParams`] explicitly.

mod connection;
mod geodesic;
mod group;
mod horizontal;
mod metric;
mod params;
mod point;

pub use connection::{
    christoffel_k, dproj, gamma_c, levi_civita, rgrad, rhess11, HessianContext, ProjectedField,
    VectorField,
};
pub use geodesic::geodesic;
pub use group::{embed, factorize, group_act, group_act_tangent, singular_values, RANK_TOL};
pub use horizontal::{
    horizontal_defect, horizontal_residual, n_adjoint, n_apply, project_horizontal, project_tangent,
    tangent_residual, vertical_lift,
};
pub use metric::{metric_apply, metric_deriv, metric_inner, metric_inverse_apply, metric_norm};
pub use params::MetricParams;
pub use point::Point;
