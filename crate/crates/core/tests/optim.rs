use num_complex::Complex64;
use proptest::prelude::*;

use fixrank::calculus::AmbientFunction;
use fixrank::linalg::{rand_ambient, seeded_rng};
use fixrank::optim::{retract, solve_gd, solve_newton_tr, truncated_cg, Method, Retraction, SolverConfig, SolverStatus, TcgExit};
use fixrank::problems::{make_problem, relative_gap, ProblemKind, ProblemSpec};
use fixrank::quotient::{factorize, horizontal_defect, metric_norm, project_horizontal, rgrad, HessianContext};
use fixrank::{Field, MetricParams, Scalar};

fn spec(kind: ProblemKind, field: Field, seed: u64) -> ProblemSpec {
    ProblemSpec { kind, field, seed, ..ProblemSpec::default() }
}

fn exact_rank_minimizer_returns_immediately<T: Scalar>(field: Field) {
    let pr = make_problem::<T>(&spec(ProblemKind::Quadratic, field, 2)).unwrap();
    let start = factorize(&pr.cost.target, pr.spec.p).unwrap();
    let params = MetricParams::unit();
    for method in [Method::Gd, Method::Newton] {
        let cfg = SolverConfig { method, gtol: 1e-8, ..SolverConfig::default() };
        let out = match method {
            Method::Gd => solve_gd(&pr.cost, &start, &params, &cfg).unwrap(),
            Method::Newton => solve_newton_tr(&pr.cost, &start, &params, &cfg).unwrap(),
        };
        assert_eq!(out.status, SolverStatus::Converged);
        assert_eq!(out.trace.records.len(), 1, "{method}: {:?}", out.trace.records.first());
    }
}

#[test]
fn solvers_stop_at_a_minimizer() {
    exact_rank_minimizer_returns_immediately::<f64>(Field::Real);
    exact_rank_minimizer_returns_immediately::<Complex64>(Field::Complex);
}

fn gd_reaches_svd_objective<T: Scalar>(field: Field, seed: u64, retraction: Retraction) {
    let pr = make_problem::<T>(&spec(ProblemKind::LowrankApprox, field, seed)).unwrap();
    let start = pr.start_point(seed).unwrap();
    let cfg = SolverConfig { retraction, ..SolverConfig::default() };
    let out = solve_gd(&pr.cost, &start, &pr.spec.params, &cfg).unwrap();
    let gap = relative_gap(pr.value(&out.point), pr.optimal_value.unwrap());
    assert!(gap.abs() <= 1e-8, "{field} seed {seed}: gap {gap:e}, status {:?}", out.status);
    assert!(out.trace.records.len() <= 501);
    for w in out.trace.records.windows(2) {
        assert!(w[1].cost <= w[0].cost * (1.0 + 1e-14), "cost rose at iteration {}", w[1].iter);
    }
    assert!(out.point.feasibility_residual() <= 1e-8);
}

#[test]
fn gradient_descent_reaches_the_svd_objective() {
    for seed in [1, 7, 19] {
        gd_reaches_svd_objective::<f64>(Field::Real, seed, Retraction::Polar);
        gd_reaches_svd_objective::<Complex64>(Field::Complex, seed, Retraction::Polar);
    }
    gd_reaches_svd_objective::<f64>(Field::Real, 3, Retraction::Geodesic);
    gd_reaches_svd_objective::<Complex64>(Field::Complex, 3, Retraction::Geodesic);
}

fn newton_converges<T: Scalar>(field: Field, kind: ProblemKind, seed: u64) {
    let pr = make_problem::<T>(&spec(kind, field, seed)).unwrap();
    let start = pr.start_point(seed).unwrap();
    let cfg = SolverConfig { method: Method::Newton, gtol: 1e-9, max_iter: 60, ..SolverConfig::default() };
    let out = solve_newton_tr(&pr.cost, &start, &pr.spec.params, &cfg).unwrap();
    assert_eq!(out.status, SolverStatus::Converged, "{kind} {field} seed {seed}");
    if let Some(opt) = pr.optimal_value {
        assert!(relative_gap(pr.value(&out.point), opt).abs() <= 1e-8);
    }
}

#[test]
fn trust_region_newton_converges_on_all_problems() {
    for kind in ProblemKind::ALL {
        newton_converges::<f64>(Field::Real, kind, 4);
        newton_converges::<Complex64>(Field::Complex, kind, 4);
    }
}

#[test]
fn quadratic_problem_has_a_superlinear_tail() {
    for seed in [1, 2, 3] {
        let pr = make_problem::<f64>(&spec(ProblemKind::Quadratic, Field::Real, seed)).unwrap();
        let start = pr.start_point(seed).unwrap();
        let cfg = SolverConfig { method: Method::Newton, gtol: 1e-12, max_iter: 60, ..SolverConfig::default() };
        let out = solve_newton_tr(&pr.cost, &start, &pr.spec.params, &cfg).unwrap();
        let g: Vec<f64> = out.trace.records.iter().map(|r| r.gnorm).collect();
        let k = g.iter().position(|&x| x <= 1e-3).expect("reaches 1e-3");
        let tail = g[k..].iter().take(4).cloned().fold(f64::INFINITY, f64::min);
        assert!(tail <= 1e-9, "seed {seed}: {g:?}");
    }
}

#[test]
fn truncated_cg_respects_negative_curvature() {
    let pr = make_problem::<Complex64>(&spec(ProblemKind::LowrankApprox, Field::Complex, 5)).unwrap();
    let y = pr.start_point(5).unwrap();
    let params = MetricParams::new(0.5, 2.0, 1.5, 0.8, 3.0).unwrap();
    let grad = rgrad(&y, &pr.cost.egrad(y.coords()), &params).unwrap();
    let cfg = SolverConfig::default();
    let mut neg = |x: &fixrank::AmbientVector<Complex64>| Ok(x.scale(-1.0));
    let out = truncated_cg(&y, &grad, &mut neg, 0.3, &params, &cfg).unwrap();
    assert_eq!(out.exit, TcgExit::NegativeCurvature);
    assert!((metric_norm(&y, &out.step, &params).unwrap() - 0.3).abs() <= 1e-12);

    let ctx = HessianContext::new(&y, &pr.cost.egrad(y.coords()), &params).unwrap();
    let mut hess = |x: &fixrank::AmbientVector<Complex64>| ctx.apply(x, &pr.cost.ehess(y.coords(), x));
    let out = truncated_cg(&y, &grad, &mut hess, 1e3, &params, &cfg).unwrap();
    assert!(out.max_defect <= 1e-8);
    assert!(horizontal_defect(&y, &out.step, &params).unwrap() <= 1e-8);
}

#[test]
fn identical_configs_give_identical_traces() {
    let pr = make_problem::<Complex64>(&spec(ProblemKind::Completion, Field::Complex, 8)).unwrap();
    let start = pr.start_point(8).unwrap();
    for method in [Method::Gd, Method::Newton] {
        let cfg = SolverConfig { method, max_iter: 40, ..SolverConfig::default() };
        let run = || {
            let out = match method {
                Method::Gd => solve_gd(&pr.cost, &start, &pr.spec.params, &cfg).unwrap(),
                Method::Newton => solve_newton_tr(&pr.cost, &start, &pr.spec.params, &cfg).unwrap(),
            };
            out.trace.records.iter().map(|r| (r.iter, r.cost, r.gnorm, r.step)).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }
}

fn retraction_is_feasible<T: Scalar>(seed: u64, scale: f64) {
    let pr = make_problem::<T>(&ProblemSpec { m: 9, n: 7, p: 3, field: T::FIELD, ..ProblemSpec::default() }).unwrap();
    let y = pr.start_point(seed).unwrap();
    let mut rng = seeded_rng(seed ^ 0x5eed);
    let params = MetricParams::new(0.3, 4.0, 2.0, 1.0, 0.5).unwrap();
    let w = rand_ambient::<T, _>(9, 7, 3, &mut rng).unwrap();
    let eta = project_horizontal(&y, &w, &params).unwrap().scale(scale);
    for kind in [Retraction::Polar, Retraction::Geodesic] {
        let z = retract(&y, &eta, kind, &params).unwrap();
        assert!(z.feasibility_residual() <= 1e-8);
    }
    let still = retract(&y, &y.zero_vector(), Retraction::Polar, &params).unwrap();
    assert!((still.p() - y.p()).norm() <= 1e-12 * y.p().norm());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn retractions_stay_on_the_manifold(seed in any::<u64>(), scale in 0.01f64..2.0) {
        retraction_is_feasible::<f64>(seed, scale);
        retraction_is_feasible::<Complex64>(seed, scale);
    }
}
