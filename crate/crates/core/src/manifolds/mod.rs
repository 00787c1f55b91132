//! Component manifolds of the total space: Stiefel and positive-definite
//! matrices, plus the Lyapunov-type operator that arises in the horizontal
//! projection.

mod lyapunov;
mod spd;
mod stiefel;

pub use lyapunov::LyapunovContext;
pub use spd::{spd_geodesic, spd_geodesic_from_eigen, SpdPoint};
pub use stiefel::{
    stiefel_geodesic, stiefel_geodesic_accel, stiefel_geodesic_with_complement,
    stiefel_tangent_project, stiefel_tangent_residual, StiefelPoint,
};

/// Orthonormality / symmetry tolerance for validated constructors.
pub const FEASIBILITY_TOL: f64 = 1e-8;
/// Tangency tolerance, relative to the vector norm.
pub const TANGENCY_TOL: f64 = 1e-8;
