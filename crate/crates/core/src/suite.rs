//! The invariant and oracle suite run by `fixrank check` and the acceptance
//! tests. Each criterion evaluates a list of named measurements over seeded
//! random draws and passes when every measurement is within its tolerance.

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{fd_check_gradient, fd_check_hessian, koszul_oracle, AmbientFunction};
use crate::error::{Error, Result};
use crate::linalg::{
    orthonormality_residual, rand_ambient, rand_spd, rand_stiefel, rand_unitary, random_matrix,
    random_tasym, random_tsym, seeded_rng, spd_fun, symmetry_residual, SpdFn,
};
use crate::manifolds::{spd_geodesic, stiefel_geodesic, LyapunovContext};
use crate::optim::{solve_gd, solve_newton_tr, Method, SolverConfig};
use crate::oracle::{
    central_difference, central_difference_scalar, projection_by_basis, stiefel_geodesic_ode,
    PolynomialField,
};
use crate::problems::{make_problem, relative_gap, ProblemKind, ProblemSpec};
use crate::quotient::{
    christoffel_k, dproj, embed, geodesic, group_act, group_act_tangent, horizontal_defect,
    levi_civita, metric_inner, metric_norm, project_horizontal, project_tangent, rgrad,
    tangent_residual, vertical_lift, HessianContext, MetricParams, Point, ProjectedField,
    VectorField,
};
use crate::scalar::{Field, Scalar};
use crate::vector::AmbientVector;

/// Sizes `(m, n, p)` drawn by the random suites.
pub const SIZES: [(usize, usize, usize); 3] = [(8, 6, 2), (12, 10, 4), (40, 30, 5)];

/// Size used by the explicit-basis projection oracle.
pub const ORACLE_SIZE: (usize, usize, usize) = (12, 10, 4);

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub draws: usize,
    pub fields: Vec<Field>,
    /// Include criterion 11 (solver runs).
    pub optimization: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 7,
            draws: 25,
            fields: vec![Field::Real, Field::Complex],
            optimization: true,
        }
    }
}

/// Worst observed value of one named measurement.
#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub worst: f64,
    pub tol: f64,
    pub samples: usize,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.worst <= self.tol
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub checks: Vec<CheckSummary>,
    pub errors: Vec<String>,
    pub elapsed_ms: f64,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && !self.checks.is_empty() && self.checks.iter().all(|c| c.passed())
    }

    /// One-line summary naming the measurement closest to (or furthest past)
    /// its tolerance.
    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let worst = self
            .checks
            .iter()
            .max_by(|a, b| (a.worst / a.tol).total_cmp(&(b.worst / b.tol)));
        let detail = match (self.errors.first(), worst) {
            (Some(e), _) => format!("error: {e}"),
            (None, Some(c)) => format!("worst {} = {:.2e} (tol {:.0e})", c.name, c.worst, c.tol),
            (None, None) => "no measurements".to_string(),
        };
        format!(
            "[{verdict}] criterion {:>2} {:<24} {} [{} checks, {:.0} ms]",
            self.id,
            self.name,
            detail,
            self.checks.len(),
            self.elapsed_ms
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub criteria: Vec<CriterionReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed())
    }

    pub fn lines(&self) -> Vec<String> {
        self.criteria.iter().map(|c| c.line()).collect()
    }

    pub fn get(&self, id: u32) -> Option<&CriterionReport> {
        self.criteria.iter().find(|c| c.id == id)
    }
}

struct Measurement {
    name: String,
    value: f64,
    tol: f64,
}

fn meas(name: impl Into<String>, value: f64, tol: f64) -> Measurement {
    Measurement {
        name: name.into(),
        value: if value.is_nan() { f64::INFINITY } else { value },
        tol,
    }
}

#[derive(Default)]
struct Tally {
    checks: Vec<CheckSummary>,
    errors: Vec<String>,
}

impl Tally {
    fn add(&mut self, result: Result<Vec<Measurement>>, label: &str) {
        match result {
            Ok(ms) => {
                for m in ms {
                    match self.checks.iter_mut().find(|c| c.name == m.name) {
                        Some(c) => {
                            c.worst = c.worst.max(m.value);
                            c.samples += 1;
                        }
                        None => self.checks.push(CheckSummary {
                            name: m.name,
                            worst: m.value,
                            tol: m.tol,
                            samples: 1,
                        }),
                    }
                }
            }
            Err(e) => self.errors.push(format!("{label}: {e}")),
        }
    }

    fn report(self, id: u32, name: &str, start: Instant) -> CriterionReport {
        CriterionReport {
            id,
            name: name.to_string(),
            checks: self.checks,
            errors: self.errors,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    }
}

/// `‖a − b‖ / max(‖b‖, floor)`.
fn rel<T: Scalar>(a: &AmbientVector<T>, b: &AmbientVector<T>, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}

/// A random base point with metric weights, plus a generator for the
/// draw's random inputs.
struct Draw<T: Scalar> {
    y: Point<T>,
    params: MetricParams,
    rng: ChaCha8Rng,
    seed: u64,
}

impl<T: Scalar> Draw<T> {
    fn new(seed: u64, unit: bool) -> Result<Self> {
        let mut rng = seeded_rng(seed);
        let (m, n, p) = SIZES[rng.random_range(0..SIZES.len())];
        Self::with_size(seed, unit, (m, n, p), rng)
    }

    fn with_size(seed: u64, unit: bool, (m, n, p): (usize, usize, usize), mut rng: ChaCha8Rng) -> Result<Self> {
        let params = if unit {
            MetricParams::unit()
        } else {
            let mut draw = || 10f64.powf(rng.random_range(-1.0..1.0));
            MetricParams::new(draw(), draw(), draw(), draw(), draw())?
        };
        let y = Point::new(
            rand_stiefel(m, p, &mut rng)?,
            rand_spd(p, &mut rng),
            rand_stiefel(n, p, &mut rng)?,
        )?;
        Ok(Self { y, params, rng, seed })
    }

    fn ambient(&mut self) -> AmbientVector<T> {
        let (m, n, p) = self.y.dims();
        rand_ambient(m, n, p, &mut self.rng).expect("dims come from a valid point")
    }

    fn tangent(&mut self) -> Result<AmbientVector<T>> {
        let w = self.ambient();
        project_tangent(&self.y, &w)
    }

    /// Horizontal vector of unit g-norm.
    fn horizontal(&mut self) -> Result<AmbientVector<T>> {
        let w = self.ambient();
        let h = project_horizontal(&self.y, &w, &self.params)?;
        let norm = metric_norm(&self.y, &h, &self.params)?;
        Ok(h.scale(1.0 / norm))
    }

    fn problem_spec(&self, kind: ProblemKind) -> ProblemSpec {
        let (m, n, p) = self.y.dims();
        ProblemSpec {
            kind,
            m,
            n,
            p,
            field: T::FIELD,
            params: self.params,
            seed: self.seed,
            density: 0.7,
            data: None,
        }
    }
}

fn draw_seeds(opts: &SuiteOptions, criterion: u32) -> Vec<u64> {
    (0..opts.draws as u64)
        .map(|k| opts.seed.wrapping_mul(1_000_003) ^ (u64::from(criterion) << 32) ^ k)
        .collect()
}

type Check<T> = fn(&mut Draw<T>) -> Result<Vec<Measurement>>;

/// Run `check` on every draw for every configured field.
fn run_draws(
    opts: &SuiteOptions,
    id: u32,
    unit: bool,
    real: Check<f64>,
    complex: Check<Complex64>,
) -> Tally {
    let seeds = draw_seeds(opts, id);
    let mut results: Vec<(String, Result<Vec<Measurement>>)> = Vec::new();
    for field in &opts.fields {
        let batch: Vec<(String, Result<Vec<Measurement>>)> = seeds
            .par_iter()
            .map(|&seed| {
                let label = format!("{field} draw seed {seed}");
                let out = match field {
                    Field::Real => Draw::<f64>::new(seed, unit).and_then(|mut d| real(&mut d)),
                    Field::Complex => Draw::<Complex64>::new(seed, unit).and_then(|mut d| complex(&mut d)),
                };
                (label, out)
            })
            .collect();
        results.extend(batch);
    }
    let mut tally = Tally::default();
    for (label, r) in results {
        tally.add(r, &label);
    }
    tally
}

fn lyapunov_check<T: Scalar>(d: &mut Draw<T>) -> Result<Vec<Measurement>> {
    let ctx = d.y.lyapunov(&d.params)?;
    let p = d.y.p().nrows();
    let x = random_tsym::<T, _>(p, &mut d.rng);
    let general = random_matrix::<T, _>(p, p, &mut d.rng);
    let roundtrip = (ctx.apply(&ctx.solve(&x)) - &x).norm() / x.norm();
    let inverse = (ctx.solve(&ctx.apply(&general)) - &general).norm() / general.norm();
    let min_m = ctx.m.iter().copied().fold(f64::INFINITY, f64::min);
    // A fresh context from the raw matrix exercises the eigen path as well.
    let fresh = LyapunovContext::new(d.y.p(), d.params.beta, d.params.delta())?;
    let fresh_gap = (fresh.solve(&x) - ctx.solve(&x)).norm() / ctx.solve(&x).norm();
    Ok(vec![
        meas("apply_solve_roundtrip", roundtrip, 1e-10),
        meas("solve_apply_roundtrip", inverse, 1e-10),
        meas("divisor_nonpositive", if min_m > 0.0 { 0.0 } else { 1.0 }, 0.0),
        meas("context_rebuild_gap", fresh_gap, 1e-10),
    ])
}

fn projection_check<T: Scalar>(d: &mut Draw<T>) -> Result<Vec<Measurement>> {
    let (y, params) = (d.y.clone(), d.params);
    let w = d.ambient();
    let w2 = d.ambient();
    let h = project_horizontal(&y, &w, &params)?;
    let hh = project_horizontal(&y, &h, &params)?;
    let p = y.p().nrows();
    let q = random_tasym::<T, _>(p, &mut d.rng);
    let vert = vertical_lift(&y, &q)?;
    let killed = project_horizontal(&y, &vert, &params)?;
    let h2 = project_horizontal(&y, &w2, &params)?;
    let lhs = metric_inner(&y, &h, &w2, &params)?;
    let rhs = metric_inner(&y, &w, &h2, &params)?;
    let scale = metric_norm(&y, &w, &params)? * metric_norm(&y, &w2, &params)?;

    let mut oracle_draw = Draw::<T>::with_size(d.seed, false, ORACLE_SIZE, seeded_rng(d.seed ^ 0x5eed))?;
    oracle_draw.params = params;
    let wo = oracle_draw.ambient();
    let closed = project_horizontal(&oracle_draw.y, &wo, &params)?;
    let basis = projection_by_basis(&oracle_draw.y, &wo, &params)?;
    Ok(vec![
        meas("idempotency", rel(&hh, &h, 1e-300), 1e-10),
        meas("tangency", tangent_residual(&y, &h) / h.norm(), 1e-10),
        meas("horizontality", horizontal_defect(&y, &h, &params)?, 1e-10),
        meas("vertical_annihilation", killed.norm() / vert.norm(), 1e-10),
        meas("g_self_adjointness", (lhs - rhs).abs() / scale, 1e-10),
        meas("basis_oracle_12x10x4", rel(&closed, &basis, 1e-300), 1e-8),
    ])
}

fn christoffel_check<T: Scalar>(d: &mut Draw<T>) -> Result<Vec<Measurement>> {
    let xi = d.tangent()?;
    let eta = d.tangent()?;
    let k = christoffel_k(&d.y, &xi, &eta, &d.params)?;
    let k_swapped = christoffel_k(&d.y, &eta, &xi, &d.params)?;
    let oracle = koszul_oracle(&d.y, &xi, &eta, &d.params)?;
    Ok(vec![
        meas("koszul_oracle", rel(&k, &oracle, 1e-300), 1e-8),
        meas("symmetry", rel(&k_swapped, &k, 1e-300), 1e-12),
    ])
}

fn dproj_check<T: Scalar>(d: &mut Draw<T>) -> Result<Vec<Measurement>> {
    let (y, params) = (d.y.clone(), d.params);
    let xi = d.tangent()?;
    let xi = xi.scale(1.0 / xi.norm());
    let w = d.ambient();
    let exact = dproj(&y, &xi, &w, &params)?;
    let fd = central_difference(&y, &xi, 1e-5, |z| project_horizontal(z, &w, &params))?;
    // Differentiating Π² = Π: (DΠ)ω = (DΠ)Πω + Π(DΠ)ω.
    let pw = project_horizontal(&y, &w, &params)?;
    let split = dproj(&y, &xi, &pw, &params)? + project_horizontal(&y, &exact, &params)?;
    Ok(vec![
        meas("central_difference_h1e-5", rel(&fd, &exact, 1e-300), 1e-6),
        meas("squared_projector_identity", rel(&split, &exact, 1e-300), 1e-8),
    ])
}

/// The three shipped costs at the draw's size and weights.
fn problems_for<T: Scalar>(d: &Draw<T>) -> Result<Vec<(ProblemKind, crate::problems::Problem<T>)>> {
    ProblemKind::ALL
        .iter()
        .map(|&k| Ok((k, make_problem::<T>(&d.problem_spec(k))?)))
        .collect()
}

fn rgrad_check<T: Scalar>(d: &mut Draw<T>) -> Result<Vec<Measurement>> {
    let mut out = Vec::new();
    for (kind, problem) in problems_for(d)? {
        let (y, params) = (d.y.clone(), d.params);
        let xi = d.horizontal()?;
        let g = rgrad(&y, &problem.cost.egrad(y.coords()), &params)?;
        let exact = metric_inner(&y, &g, &xi, &params)?;
        let fd = central_difference_scalar(&y, &xi, 1e-5, |z| Ok(problem.value(z)))?;
        let scale = metric_norm(&y, &g, &params)?.max(exact.abs());
        out.push(meas(format!("{kind}_directional_fd"), (exact - fd).abs() / scale, 1e-6));
        let fdg = fd_check_gradient(&problem.cost, y.coords(), 4, 1e-5, d.seed);
        let fdh = fd_check_hessian(&problem.cost, y.coords(), 4, 1e-5, d.seed);
        out.push(meas(format!("{kind}_egrad_fd"), fdg.max_rel_error, 1e-6));
        out.push(meas(format!("{kind}_ehess_fd"), fdh.max_rel_error, 1e-6));
        out.push(meas(format!("{kind}_rgrad_horizontal"), horizontal_defect(&y, &g, &params)?, 1e-10));
    }
    Ok(out)
}

fn rhess_check<T: Scalar>(d: &mut Draw<T>) -> Result<Vec<Measurement>> {
    let mut out = Vec::new();
    for (kind, problem) in problems_for(d)? {
        let (y, params) = (d.y.clone(), d.params);
        let xi = d.horizontal()?;
        let eta = d.horizontal()?;
        let ctx = HessianContext::new(&y, &problem.cost.egrad(y.coords()), &params)?;
        let h_xi = ctx.apply(&xi, &problem.cost.ehess(y.coords(), &xi))?;
        let h_eta = ctx.apply(&eta, &problem.cost.ehess(y.coords(), &eta))?;
        let quad = metric_inner(&y, &h_xi, &xi, &params)?;
        let h = 1e-3;
        let f = |t: f64| -> Result<f64> { Ok(problem.value(&geodesic(&y, &xi, t, &params)?)) };
        let second = (f(h)? - 2.0 * f(0.0)? + f(-h)?) / (h * h);
        let norm_h_xi = metric_norm(&y, &h_xi, &params)?;
        out.push(meas(
            format!("{kind}_geodesic_second_difference"),
            (quad - second).abs() / second.abs().max(norm_h_xi),
            1e-5,
        ));
        let gap = metric_inner(&y, &h_xi, &eta, &params)? - metric_inner(&y, &xi, &h_eta, &params)?;
        let scale = norm_h_xi + metric_norm(&y, &h_eta, &params)?;
        out.push(meas(format!("{kind}_g_symmetry"), gap.abs() / scale, 1e-6));
        out.push(meas(format!("{kind}_output_horizontal"), horizontal_defect(&y, &h_xi, &params)?, 1e-10));
    }
    Ok(out)
}

fn connection_check<T: Scalar>(d: &mut Draw<T>) -> Result<Vec<Measurement>> {
    let (y, params) = (d.y.clone(), d.params);
    let xi = d.horizontal()?;
    let fx = ProjectedField { ambient: d.ambient(), params };
    let fy = ProjectedField { ambient: d.ambient(), params };
    let pairing = |z: &Point<T>| -> Result<f64> { metric_inner(z, &fx.value(z)?, &fy.value(z)?, &params) };
    let fd = central_difference_scalar(&y, &xi, 1e-4, pairing)?;
    let (x0, y0) = (fx.value(&y)?, fy.value(&y)?);
    let a = metric_inner(&y, &levi_civita(&y, &xi, &fx, &params)?, &y0, &params)?;
    let b = metric_inner(&y, &x0, &levi_civita(&y, &xi, &fy, &params)?, &params)?;
    let compat = (fd - a - b).abs() / (fd.abs() + a.abs() + b.abs()).max(1e-300);

    let (m, n, p) = y.dims();
    let field = |rng: &mut ChaCha8Rng| -> Result<PolynomialField<T>> {
        Ok(PolynomialField {
            constant: rand_ambient(m, n, p, rng)?,
            s_u: random_matrix(m, m, rng),
            r: random_matrix(p, p, rng),
            s_v: random_matrix(n, n, rng),
            params,
        })
    };
    let px = field(&mut d.rng)?;
    let py = field(&mut d.rng)?;
    let (vx, vy) = (px.value(&y)?, py.value(&y)?);
    let nabla_xy = levi_civita(&y, &vx, &py, &params)?;
    let nabla_yx = levi_civita(&y, &vy, &px, &params)?;
    let bracket = project_horizontal(&y, &(py.derivative(&y, &vx)? - px.derivative(&y, &vy)?), &params)?;
    let torsion = (&nabla_xy - &nabla_yx - &bracket).norm() / (nabla_xy.norm() + nabla_yx.norm()).max(1e-300);
    let fd_deriv = central_difference(&y, &vx, 1e-5, |z| py.value(z))?;
    Ok(vec![
        meas("metric_compatibility_h1e-4", compat, 1e-6),
        meas("torsion_polynomial_fields", torsion, 1e-6),
        meas("polynomial_field_derivative_fd", rel(&fd_deriv, &py.derivative(&y, &vx)?, 1e-300), 1e-6),
    ])
}

fn geodesic_check<T: Scalar>(d: &mut Draw<T>) -> Result<Vec<Measurement>> {
    let (y, params) = (d.y.clone(), d.params);
    let eta = d.horizontal()?;
    let mut feas: f64 = 0.0;
    let mut horiz: f64 = 0.0;
    for k in 0..=10 {
        let t = k as f64 / 10.0;
        let z = geodesic(&y, &eta, t, &params)?;
        feas = feas.max(z.feasibility_residual());
        if k == 10 {
            // Velocity at t = 1 by central difference, checked horizontal at z.
            let h = 1e-5;
            let fwd = geodesic(&y, &eta, t + h, &params)?;
            let bwd = geodesic(&y, &eta, t - h, &params)?;
            let vel = (fwd.coords() - bwd.coords()).scale(0.5 / h);
            horiz = horizontal_defect(&z, &vel, &params)?;
        }
    }
    let p = y.p();
    let h = 2e-6 * p.norm() / eta.p.norm();
    let spd_fd = (spd_geodesic(p, &eta.p, h)?.into_inner() - spd_geodesic(p, &eta.p, -h)?.into_inner()).scale(0.5 / h);
    let spd_vel = (spd_fd - &eta.p).norm() / eta.p.norm();
    let root = spd_fun(p, SpdFn::Sqrt)?;
    let inv_root = spd_fun(p, SpdFn::InvSqrt)?;
    let closed = &root * spd_fun(&(&inv_root * &eta.p * &inv_root), SpdFn::Exp)? * &root;
    let spd_closed = (geodesic(&y, &eta, 1.0, &params)?.p() - closed).norm() / p.norm();
    let a = params.alpha1 / params.alpha0;
    let ode = stiefel_geodesic_ode(y.u(), &eta.u, 1.0, a, 1e-12);
    let exact = stiefel_geodesic(y.u(), &eta.u, 1.0, params.alpha0, params.alpha1)?;
    let stiefel_ode = (exact.matrix() - &ode).norm();
    Ok(vec![
        meas("feasibility_t_in_0_1", feas, 1e-8),
        meas("spd_closed_form", spd_closed, 1e-12),
        meas("spd_initial_velocity_fd", spd_vel, 1e-8),
        meas("stiefel_closed_form_vs_ode", stiefel_ode, 1e-8),
        meas("velocity_stays_horizontal", horiz, 1e-6),
        meas("ode_orthonormality", orthonormality_residual(&ode), 1e-8),
    ])
}

fn group_check<T: Scalar>(d: &mut Draw<T>) -> Result<Vec<Measurement>> {
    let (y, params) = (d.y.clone(), d.params);
    let p = y.p().nrows();
    let o = rand_unitary::<T, _>(p, &mut d.rng);
    let moved = group_act(&o, &y)?;
    let f = embed(&y);
    let embed_gap = (embed(&moved) - &f).norm() / f.norm();
    let xi = d.tangent()?;
    let eta = d.tangent()?;
    let before = metric_inner(&y, &xi, &eta, &params)?;
    let after = metric_inner(&moved, &group_act_tangent(&o, &xi)?, &group_act_tangent(&o, &eta)?, &params)?;
    let metric_gap = (after - before).abs() / (metric_norm(&y, &xi, &params)? * metric_norm(&y, &eta, &params)?);
    let mut out = vec![
        meas("embed_invariance", embed_gap, 1e-12),
        meas("metric_invariance", metric_gap, 1e-12),
        meas("p_symmetry_after_action", symmetry_residual(moved.p()), 1e-12),
    ];
    for (kind, problem) in problems_for(d)? {
        let g = rgrad(&y, &problem.cost.egrad(y.coords()), &params)?;
        let g_moved = rgrad(&moved, &problem.cost.egrad(moved.coords()), &params)?;
        let equiv = rel(&g_moved, &group_act_tangent(&o, &g)?, 1e-300);
        out.push(meas(format!("{kind}_rgrad_equivariance"), equiv, 1e-10));
    }
    Ok(out)
}

struct Suite {
    id: u32,
    name: &'static str,
    real: Check<f64>,
    complex: Check<Complex64>,
}

fn geometry_suites() -> Vec<Suite> {
    vec![
        Suite { id: 1, name: "lyapunov", real: lyapunov_check, complex: lyapunov_check },
        Suite { id: 2, name: "projection", real: projection_check, complex: projection_check },
        Suite { id: 3, name: "christoffel", real: christoffel_check, complex: christoffel_check },
        Suite { id: 4, name: "projection-derivative", real: dproj_check, complex: dproj_check },
        Suite { id: 5, name: "riemannian-gradient", real: rgrad_check, complex: rgrad_check },
        Suite { id: 6, name: "riemannian-hessian", real: rhess_check, complex: rhess_check },
        Suite { id: 7, name: "connection", real: connection_check, complex: connection_check },
        Suite { id: 8, name: "geodesics", real: geodesic_check, complex: geodesic_check },
        Suite { id: 9, name: "group-action", real: group_check, complex: group_check },
    ]
}

/// Criteria 1 to 9 with random metric weights.
pub fn run_geometry_criterion(opts: &SuiteOptions, id: u32) -> Option<CriterionReport> {
    let suite = geometry_suites().into_iter().find(|s| s.id == id)?;
    let start = Instant::now();
    let tally = run_draws(opts, id, false, suite.real, suite.complex);
    Some(tally.report(id, suite.name, start))
}

/// Criterion 10: criteria 1 to 9 again with every weight equal to one.
pub fn run_reduction_criterion(opts: &SuiteOptions) -> CriterionReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut errors = Vec::new();
    for suite in geometry_suites() {
        let tally = run_draws(opts, suite.id, true, suite.real, suite.complex);
        for mut c in tally.checks {
            c.name = format!("{}/{}", suite.name, c.name);
            checks.push(c);
        }
        errors.extend(tally.errors.into_iter().map(|e| format!("{}: {e}", suite.name)));
    }
    CriterionReport {
        id: 10,
        name: "unit-weights".to_string(),
        checks,
        errors,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Outcome of the end-to-end solver runs of criterion 11.
#[derive(Debug, Clone, Serialize)]
pub struct SolverRun {
    pub label: String,
    pub iterations: usize,
    pub final_gnorm: f64,
    pub relative_gap: Option<f64>,
}

fn approx_spec(field: Field, seed: u64, kind: ProblemKind) -> ProblemSpec {
    ProblemSpec {
        kind,
        m: 20,
        n: 15,
        p: 3,
        field,
        seed,
        ..ProblemSpec::default()
    }
}

fn optimization_typed<T: Scalar>(seed: u64) -> Result<Vec<Measurement>> {
    let field = T::FIELD;
    let mut out = Vec::new();
    let spec = approx_spec(field, seed, ProblemKind::LowrankApprox);
    let problem = make_problem::<T>(&spec)?;
    let optimal = problem
        .optimal_value
        .ok_or_else(|| Error::Invariant("approximation problem without optimal value".into()))?;
    let start = problem.start_point(seed)?;

    let gd_cfg = SolverConfig {
        method: Method::Gd,
        max_iter: 500,
        gtol: 1e-9,
        ..SolverConfig::default()
    };
    let gd = solve_gd(&problem.cost, &start, &spec.params, &gd_cfg)?;
    let gd_iters = gd.trace.records.len() - 1;
    let gd_gap = relative_gap(problem.value(&gd.point), optimal);
    out.push(meas(format!("{field}_gd_relative_gap"), gd_gap.abs(), 1e-8));
    out.push(meas(format!("{field}_gd_iterations"), gd_iters as f64, 500.0));
    let rise = gd
        .trace
        .records
        .windows(2)
        .map(|w| (w[1].cost - w[0].cost) / w[0].cost.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    out.push(meas(format!("{field}_gd_relative_cost_increase"), rise, 1e-14));

    let tr_cfg = SolverConfig {
        method: Method::Newton,
        max_iter: 30,
        gtol: 1e-9,
        ..SolverConfig::default()
    };
    let tr = solve_newton_tr(&problem.cost, &start, &spec.params, &tr_cfg)?;
    let tr_iters = tr.trace.records.len() - 1;
    let tr_gnorm = tr.trace.last().map_or(f64::INFINITY, |r| r.gnorm);
    out.push(meas(format!("{field}_newton_final_gnorm"), tr_gnorm, 1e-9));
    out.push(meas(format!("{field}_newton_outer_iterations"), tr_iters as f64, 30.0));
    out.push(meas(
        format!("{field}_newton_relative_gap"),
        relative_gap(problem.value(&tr.point), optimal).abs(),
        1e-8,
    ));

    let qspec = approx_spec(field, seed, ProblemKind::Quadratic);
    let quad = make_problem::<T>(&qspec)?;
    let qstart = quad.start_point(seed)?;
    let qcfg = SolverConfig {
        method: Method::Newton,
        max_iter: 100,
        gtol: 1e-12,
        ..SolverConfig::default()
    };
    let run = solve_newton_tr(&quad.cost, &qstart, &qspec.params, &qcfg)?;
    let g: Vec<f64> = run.trace.records.iter().map(|r| r.gnorm).collect();
    let tail = match g.iter().position(|&x| x <= 1e-3) {
        Some(k) => g[k..].iter().take(4).copied().fold(f64::INFINITY, f64::min),
        None => f64::INFINITY,
    };
    out.push(meas(format!("{field}_quadratic_gnorm_3_steps_after_1e-3"), tail, 1e-9));
    Ok(out)
}

/// Criterion 11: solver runs on the 20x15, p = 3 problems.
pub fn run_optimization_criterion(opts: &SuiteOptions) -> CriterionReport {
    let start = Instant::now();
    let mut tally = Tally::default();
    let results: Vec<(Field, Result<Vec<Measurement>>)> = opts
        .fields
        .par_iter()
        .map(|&field| {
            let r = match field {
                Field::Real => optimization_typed::<f64>(opts.seed),
                Field::Complex => optimization_typed::<Complex64>(opts.seed),
            };
            (field, r)
        })
        .collect();
    for (field, r) in results {
        tally.add(r, &field.to_string());
    }
    tally.report(11, "optimization", start)
}

/// Criteria 1 to 11 (11 only when `opts.optimization`).
pub fn run_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut criteria: Vec<CriterionReport> = (1..=9)
        .filter_map(|id| run_geometry_criterion(opts, id))
        .collect();
    criteria.push(run_reduction_criterion(opts));
    if opts.optimization {
        criteria.push(run_optimization_criterion(opts));
    }
    SuiteReport { seed: opts.seed, criteria }
}
