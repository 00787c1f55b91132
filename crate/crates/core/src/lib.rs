//! Riemannian geometry and optimization on the manifold of fixed-rank
//! matrices over ℝ and ℂ.
//!
//! A rank-`p` matrix `F = UPVᵗ` is represented by `(U, P, V)` with `U`, `V`
//! on Stiefel manifolds and `P` positive definite; the representation is
//! unique up to the action of the 𝔱-orthogonal group `U(p)`. The crate
//! provides the metric, horizontal projection, connection, gradient,
//! Hessian and geodesics for a five-parameter family of metrics
//! ([`quotient`]), finite-difference and index-raising oracles
//! ([`calculus`], [`oracle`]), gradient-descent and trust-region solvers
//! ([`optim`]), shipped test problems ([`problems`]) and an experiment
//! runner backing the `fixrank` binary ([`experiment`], [`suite`]).

pub mod calculus;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod manifolds;
pub mod optim;
pub mod oracle;
pub mod problems;
pub mod quotient;
pub mod scalar;
pub mod suite;
pub mod vector;

pub use error::{Error, Result};
pub use quotient::{MetricParams, Point};
pub use scalar::{Field, Scalar};
pub use vector::{AmbientVector, NCoordinates};
