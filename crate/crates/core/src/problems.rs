//! Shipped cost functions. All three are weighted least-squares fits in the
//! embedding `F = UPVᵗ`, so they depend only on the class `⟦U, P, V⟧`:
//!
//! * `lowrank-approx`: `½‖UPVᵗ − A‖²` for a seeded dense `A`;
//! * `completion`: `½‖M∘(UPVᵗ − A)‖²` for a seeded Bernoulli mask `M`;
//! * `quadratic`: `½⟨F − F₀, 𝒲(F − F₀)⟩` for a seeded positive diagonal
//!   scaling `𝒲` and a seeded rank-`p` target `F₀`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::AmbientFunction;
use crate::error::{Error, Result};
use crate::linalg::{rand_spd, rand_stiefel, random_matrix, real_diag, seeded_rng, Mat};
use crate::quotient::{singular_values, MetricParams, Point};
use crate::scalar::{Field, Scalar};
use crate::vector::AmbientVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Quadratic,
    LowrankApprox,
    Completion,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 3] = [
        ProblemKind::Quadratic,
        ProblemKind::LowrankApprox,
        ProblemKind::Completion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::Quadratic => "quadratic",
            ProblemKind::LowrankApprox => "lowrank-approx",
            ProblemKind::Completion => "completion",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown problem kind '{s}'")))
    }
}

/// Everything needed to rebuild a problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub field: Field,
    pub params: MetricParams,
    pub seed: u64,
    /// Fraction of observed entries (completion only).
    pub density: f64,
    /// Data matrix file; generated from `seed` when absent.
    pub data: Option<PathBuf>,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        Self {
            kind: ProblemKind::LowrankApprox,
            m: 20,
            n: 15,
            p: 3,
            field: Field::Real,
            params: MetricParams::unit(),
            seed: 0,
            density: 0.6,
            data: None,
        }
    }
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.p > self.m.min(self.n) {
            return Err(Error::Dimensions(format!(
                "rank {} must be in 1..=min(m={}, n={})",
                self.p, self.m, self.n
            )));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::Config(format!("density {} must lie in (0, 1]", self.density)));
        }
        self.params.validate()
    }
}

/// `½ Σᵢⱼ wᵢⱼ |(UPVᵗ − A)ᵢⱼ|²`, with unit weights when `weights` is absent.
#[derive(Debug, Clone)]
pub struct WeightedLeastSquares<T: Scalar> {
    pub target: Mat<T>,
    pub weights: Option<DMatrix<f64>>,
}

impl<T: Scalar> WeightedLeastSquares<T> {
    pub fn new(target: Mat<T>, weights: Option<DMatrix<f64>>) -> Result<Self> {
        if let Some(w) = &weights {
            if w.shape() != target.shape() {
                return Err(Error::Shape {
                    context: "least-squares weights",
                    expected: target.shape(),
                    got: w.shape(),
                });
            }
            if w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::Config("weights must be finite and nonnegative".into()));
            }
        }
        Ok(Self { target, weights })
    }

    fn weigh(&self, e: Mat<T>) -> Mat<T> {
        match &self.weights {
            None => e,
            Some(w) => e.zip_map(w, |x, wij| x.scale(wij)),
        }
    }

    fn embedding(y: &AmbientVector<T>) -> Mat<T> {
        &y.u * &y.p * y.v.adjoint()
    }

    fn residual(&self, y: &AmbientVector<T>) -> Mat<T> {
        Self::embedding(y) - &self.target
    }
}

impl<T: Scalar> AmbientFunction<T> for WeightedLeastSquares<T> {
    fn value(&self, y: &AmbientVector<T>) -> f64 {
        let e = self.residual(y);
        0.5 * self.weigh(e.clone()).dotc(&e).real()
    }

    fn egrad(&self, y: &AmbientVector<T>) -> AmbientVector<T> {
        let g = self.weigh(self.residual(y));
        AmbientVector::new(
            &g * &y.v * y.p.adjoint(),
            y.u.adjoint() * &g * &y.v,
            g.adjoint() * &y.u * &y.p,
        )
    }

    fn ehess(&self, y: &AmbientVector<T>, xi: &AmbientVector<T>) -> AmbientVector<T> {
        let g = self.weigh(self.residual(y));
        let (u, p, v) = (&y.u, &y.p, &y.v);
        let df = &xi.u * p * v.adjoint() + u * &xi.p * v.adjoint() + u * p * xi.v.adjoint();
        let dg = self.weigh(df);
        AmbientVector::new(
            &dg * v * p.adjoint() + &g * &xi.v * p.adjoint() + &g * v * xi.p.adjoint(),
            xi.u.adjoint() * &g * v + u.adjoint() * &dg * v + u.adjoint() * &g * &xi.v,
            dg.adjoint() * u * p + g.adjoint() * &xi.u * p + g.adjoint() * u * &xi.p,
        )
    }
}

/// A generated problem instance: the cost and, for the approximation
/// problem, the optimal objective from the truncated SVD.
#[derive(Debug, Clone)]
pub struct Problem<T: Scalar> {
    pub spec: ProblemSpec,
    pub cost: WeightedLeastSquares<T>,
    pub optimal_value: Option<f64>,
}

impl<T: Scalar> Problem<T> {
    pub fn value(&self, y: &Point<T>) -> f64 {
        self.cost.value(y.coords())
    }

    /// Seeded random starting point of matching dimensions.
    pub fn start_point(&self, seed: u64) -> Result<Point<T>> {
        random_point(self.spec.m, self.spec.n, self.spec.p, &mut seeded_rng(seed))
    }
}

/// Seeded rank-`p` matrix `U diag(s) Vᵗ` with singular values spread over
/// `[1, 2]`.
pub fn rank_p_matrix<T: Scalar, R: Rng + ?Sized>(m: usize, n: usize, p: usize, rng: &mut R) -> Result<Mat<T>> {
    let u = rand_stiefel::<T, _>(m, p, rng)?;
    let v = rand_stiefel::<T, _>(n, p, rng)?;
    let s = nalgebra::DVector::from_fn(p, |i, _| 2.0 - i as f64 / p as f64);
    Ok(u * real_diag::<T>(&s) * v.adjoint())
}

/// Noise level of the generated approximation target, relative to unit
/// entries scaled by `1/√max(m, n)`.
const APPROX_NOISE: f64 = 0.1;

/// Build the instance described by `spec`; `T` must match `spec.field`.
pub fn make_problem<T: Scalar>(spec: &ProblemSpec) -> Result<Problem<T>> {
    spec.validate()?;
    if T::FIELD != spec.field {
        return Err(Error::Config(format!(
            "problem field {} does not match the requested scalar type {}",
            spec.field,
            T::FIELD
        )));
    }
    let (m, n, p) = (spec.m, spec.n, spec.p);
    let mut rng = seeded_rng(spec.seed);
    let loaded = match &spec.data {
        Some(path) => {
            let a = crate::experiment::read_matrix::<T>(path)?;
            if a.shape() != (m, n) {
                return Err(Error::Shape {
                    context: "data matrix",
                    expected: (m, n),
                    got: a.shape(),
                });
            }
            Some(a)
        }
        None => None,
    };
    let (cost, optimal_value) = match spec.kind {
        ProblemKind::LowrankApprox => {
            let a = match loaded {
                Some(a) => a,
                None => {
                    let noise = random_matrix::<T, _>(m, n, &mut rng).scale(APPROX_NOISE / (m.max(n) as f64).sqrt());
                    rank_p_matrix::<T, _>(m, n, p, &mut rng)? + noise
                }
            };
            let sigma = singular_values(&a)?;
            let tail: f64 = sigma.iter().skip(p).map(|s| s * s).sum();
            (WeightedLeastSquares::new(a, None)?, Some(0.5 * tail))
        }
        ProblemKind::Completion => {
            let a = match loaded {
                Some(a) => a,
                None => rank_p_matrix::<T, _>(m, n, p, &mut rng)?,
            };
            let mask = DMatrix::from_fn(m, n, |_, _| {
                if rng.random::<f64>() < spec.density {
                    1.0
                } else {
                    0.0
                }
            });
            (WeightedLeastSquares::new(a, Some(mask))?, None)
        }
        ProblemKind::Quadratic => {
            let target = match loaded {
                Some(a) => a,
                None => rank_p_matrix::<T, _>(m, n, p, &mut rng)?,
            };
            let weights = DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0f64).exp());
            (WeightedLeastSquares::new(target, Some(weights))?, None)
        }
    };
    Ok(Problem {
        spec: spec.clone(),
        cost,
        optimal_value,
    })
}

/// Seeded point with `P` eigenvalues around one.
pub fn random_point<T: Scalar, R: Rng + ?Sized>(m: usize, n: usize, p: usize, rng: &mut R) -> Result<Point<T>> {
    let u = rand_stiefel(m, p, rng)?;
    let v = rand_stiefel(n, p, rng)?;
    Point::new(u, rand_spd(p, rng), v)
}

/// Relative objective gap `(f − f*) / max(f*, tiny)`.
pub fn relative_gap(value: f64, optimal: f64) -> f64 {
    (value - optimal) / optimal.abs().max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{fd_check_gradient, fd_check_hessian};
    use crate::quotient::{factorize, rgrad};
    use num_complex::Complex64;

    fn spec(kind: ProblemKind, field: Field) -> ProblemSpec {
        ProblemSpec {
            kind,
            m: 9,
            n: 7,
            p: 2,
            field,
            seed: 3,
            ..ProblemSpec::default()
        }
    }

    #[test]
    fn exact_rank_target_is_a_zero_of_the_cost() {
        let mut rng = seeded_rng(8);
        let a = rank_p_matrix::<Complex64, _>(9, 7, 2, &mut rng).unwrap();
        let f = WeightedLeastSquares::new(a.clone(), None).unwrap();
        let y = factorize(&a, 2).unwrap();
        assert!(f.value(y.coords()) < 1e-26);
        let g = rgrad(&y, &f.egrad(y.coords()), &MetricParams::unit()).unwrap();
        assert!(g.norm() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for kind in ProblemKind::ALL {
            let real = make_problem::<f64>(&spec(kind, Field::Real)).unwrap();
            let complex = make_problem::<Complex64>(&spec(kind, Field::Complex)).unwrap();
            let (yr, yc) = (real.start_point(4).unwrap(), complex.start_point(4).unwrap());
            let r = fd_check_gradient(&real.cost, yr.coords(), 8, 1e-5, 1);
            let c = fd_check_gradient(&complex.cost, yc.coords(), 8, 1e-5, 1);
            assert!(r.max_rel_error <= 1e-6 && c.max_rel_error <= 1e-6, "{kind}: {r:?} {c:?}");
            let r = fd_check_hessian(&real.cost, yr.coords(), 8, 1e-5, 2);
            let c = fd_check_hessian(&complex.cost, yc.coords(), 8, 1e-5, 2);
            assert!(r.max_rel_error <= 1e-6 && c.max_rel_error <= 1e-6, "{kind}: {r:?} {c:?}");
        }
    }

    #[test]
    fn full_mask_completion_equals_approximation() {
        let mut rng = seeded_rng(9);
        let a = random_matrix::<f64, _>(6, 5, &mut rng);
        let plain = WeightedLeastSquares::new(a.clone(), None).unwrap();
        let masked = WeightedLeastSquares::new(a, Some(DMatrix::from_element(6, 5, 1.0))).unwrap();
        for _ in 0..3 {
            let y = random_point::<f64, _>(6, 5, 2, &mut rng).unwrap();
            assert_eq!(plain.value(y.coords()), masked.value(y.coords()));
        }
    }

    #[test]
    fn spec_validation_and_field_check() {
        let mut s = spec(ProblemKind::Completion, Field::Real);
        s.density = 0.0;
        assert!(make_problem::<f64>(&s).is_err());
        let s = spec(ProblemKind::Quadratic, Field::Real);
        assert!(make_problem::<Complex64>(&s).is_err());
        assert_eq!("lowrank-approx".parse::<ProblemKind>().unwrap(), ProblemKind::LowrankApprox);
        assert!("cubic".parse::<ProblemKind>().is_err());
    }
}
