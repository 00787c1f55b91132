use crate::calculus::AmbientFunction;
use crate::error::Result;
use crate::quotient::{metric_inner, metric_norm, project_horizontal, rgrad, MetricParams, Point};
use crate::scalar::Scalar;
use crate::vector::AmbientVector;

use super::{retract, Clock, SolverConfig, SolverOutcome, SolverStatus, SolverTrace, TraceRecord};

/// Relative cost change below which the Armijo test cannot discriminate;
/// such trials are accepted only if they reduce the gradient norm.
const ROUNDOFF_SLACK: f64 = 8.0 * f64::EPSILON;

/// Barzilai–Borwein step `⟨s, s⟩ / ⟨s, Δgrad⟩` at the new iterate, with the
/// previous step and gradient carried over by horizontal projection.
/// `None` when the curvature estimate is not positive.
fn bb_step<T: Scalar>(
    y: &Point<T>,
    grad: &AmbientVector<T>,
    prev_grad: &AmbientVector<T>,
    prev_step: f64,
    params: &MetricParams,
) -> Result<Option<f64>> {
    let carried = project_horizontal(y, prev_grad, params)?;
    let s = carried.scale(-prev_step);
    let dg = grad - &carried;
    let ss = metric_inner(y, &s, &s, params)?;
    let sy = metric_inner(y, &s, &dg, params)?;
    Ok((sy > 0.0 && ss > 0.0).then(|| ss / sy))
}

/// Riemannian gradient descent with monotone Armijo backtracking along the
/// configured retraction. Each line search starts from the Barzilai–Borwein
/// step (twice the last accepted step when that is unavailable), capped so
/// the step has g-length at most `max_step_length`. A trial whose retraction
/// leaves the manifold is rejected. Once cost differences drop to roundoff,
/// sufficient decrease is judged on the gradient norm instead.
pub fn solve_gd<T: Scalar, F: AmbientFunction<T> + ?Sized>(
    f: &F,
    start: &Point<T>,
    params: &MetricParams,
    cfg: &SolverConfig,
) -> Result<SolverOutcome<T>> {
    cfg.validate()?;
    params.validate()?;
    let clock = Clock::start();
    let mut trace = SolverTrace::default();
    let mut y = start.clone();
    let mut cost = f.value(y.coords());
    let mut grad = rgrad(&y, &f.egrad(y.coords()), params)?;
    let mut gnorm = metric_norm(&y, &grad, params)?;
    let mut step = cfg.initial_step;
    let mut accepted = 0.0;
    let mut iter = 0;
    loop {
        trace.records.push(TraceRecord {
            iter,
            cost,
            gnorm,
            step: accepted,
            elapsed_ms: clock.ms(),
        });
        if gnorm <= cfg.gtol {
            return Ok(SolverOutcome { point: y, trace, status: SolverStatus::Converged });
        }
        if iter >= cfg.max_iter {
            return Ok(SolverOutcome { point: y, trace, status: SolverStatus::MaxIterations });
        }
        let slope = gnorm * gnorm;
        step = step.min(cfg.max_step_length / gnorm);
        let slack = ROUNDOFF_SLACK * cost.abs();
        let mut found = None;
        for _ in 0..=cfg.max_backtracks {
            if let Ok(trial) = retract(&y, &grad.scale(-step), cfg.retraction, params) {
                let trial_cost = f.value(trial.coords());
                let decrease = cost - trial_cost;
                let sufficient = decrease >= cfg.armijo * step * slope;
                if sufficient || decrease.abs() <= slack {
                    let trial_grad = rgrad(&trial, &f.egrad(trial.coords()), params)?;
                    let trial_gnorm = metric_norm(&trial, &trial_grad, params)?;
                    if sufficient || trial_gnorm < gnorm {
                        found = Some((trial, trial_cost, trial_grad, trial_gnorm));
                        break;
                    }
                }
            }
            step *= cfg.backtrack;
        }
        let Some((next, next_cost, next_grad, next_gnorm)) = found else {
            return Ok(SolverOutcome { point: y, trace, status: SolverStatus::LineSearchFailed });
        };
        accepted = step;
        step = bb_step(&next, &next_grad, &grad, accepted, params)?.unwrap_or(2.0 * accepted);
        y = next;
        cost = next_cost;
        grad = next_grad;
        gnorm = next_gnorm;
        iter += 1;
    }
}
