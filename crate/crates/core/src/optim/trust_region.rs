use crate::calculus::AmbientFunction;
use crate::error::{Error, Result};
use crate::quotient::{horizontal_defect, metric_inner, HessianContext, MetricParams, Point};
use crate::scalar::Scalar;
use crate::vector::{AmbientVector, NCoordinates};

use super::{retract, Clock, SolverConfig, SolverOutcome, SolverStatus, SolverTrace, TraceRecord};

/// Largest relative horizontality defect tolerated in CG iterates.
const CG_HORIZONTAL_TOL: f64 = 1e-8;

/// Radius below which the trust region is considered collapsed.
const MIN_RADIUS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcgExit {
    ResidualReduced,
    NegativeCurvature,
    Boundary,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct TcgOutcome<T: Scalar> {
    pub step: AmbientVector<T>,
    /// `rhess¹¹` applied to `step`.
    pub hess_step: AmbientVector<T>,
    pub exit: TcgExit,
    pub iterations: usize,
    /// Largest relative horizontality defect seen among the iterates.
    pub max_defect: f64,
}

/// Steihaug–Toint truncated CG for `min ⟨g, η⟩ + ½⟨η, Hη⟩` over horizontal
/// `η` with `‖η‖_g ≤ radius`, all pairings in the metric g.
pub fn truncated_cg<T: Scalar>(
    y: &Point<T>,
    grad: &AmbientVector<T>,
    hess: &mut dyn FnMut(&AmbientVector<T>) -> Result<AmbientVector<T>>,
    radius: f64,
    params: &MetricParams,
    cfg: &SolverConfig,
) -> Result<TcgOutcome<T>> {
    let ip = |a: &AmbientVector<T>, b: &AmbientVector<T>| metric_inner(y, a, b, params);
    let (m, n, p) = y.dims();
    let max_iter = if cfg.cg_max_iter == 0 {
        NCoordinates::<T>::zeros(m, n, p).real_dim()
    } else {
        cfg.cg_max_iter
    };
    let mut eta = grad.zeros_like();
    let mut h_eta = grad.zeros_like();
    let mut r = grad.clone();
    let mut rr = ip(&r, &r)?;
    let r0 = rr.sqrt();
    let target = r0 * r0.powf(cfg.cg_theta).min(cfg.cg_kappa);
    let mut delta = -grad;
    let mut max_defect: f64 = 0.0;
    let mut exit = TcgExit::MaxIterations;
    let mut iterations = 0;
    for j in 0..max_iter {
        iterations = j + 1;
        let h_delta = hess(&delta)?;
        let defect = horizontal_defect(y, &h_delta, params)?;
        max_defect = max_defect.max(defect);
        if defect > CG_HORIZONTAL_TOL {
            return Err(Error::Invariant(format!(
                "Hessian output left the horizontal space (relative defect {defect:e})"
            )));
        }
        let curvature = ip(&delta, &h_delta)?;
        let alpha = rr / curvature;
        let next_norm2 = {
            let trial = &eta + &delta.scale(alpha);
            ip(&trial, &trial)?
        };
        if curvature <= 0.0 || next_norm2 >= radius * radius {
            let ee = ip(&eta, &eta)?;
            let ed = ip(&eta, &delta)?;
            let dd = ip(&delta, &delta)?;
            let tau = (-ed + (ed * ed + dd * (radius * radius - ee)).max(0.0).sqrt()) / dd;
            eta.axpy(tau, &delta);
            h_eta.axpy(tau, &h_delta);
            exit = if curvature <= 0.0 { TcgExit::NegativeCurvature } else { TcgExit::Boundary };
            break;
        }
        eta.axpy(alpha, &delta);
        h_eta.axpy(alpha, &h_delta);
        r.axpy(alpha, &h_delta);
        let rr_next = ip(&r, &r)?;
        if rr_next.sqrt() <= target {
            exit = TcgExit::ResidualReduced;
            break;
        }
        let beta = rr_next / rr;
        rr = rr_next;
        delta = delta.scale(beta) - &r;
        max_defect = max_defect.max(horizontal_defect(y, &eta, params)?);
    }
    Ok(TcgOutcome {
        step: eta,
        hess_step: h_eta,
        exit,
        iterations,
        max_defect,
    })
}

/// Riemannian trust-region Newton with truncated CG on the horizontal space,
/// using `rhess¹¹` as the model Hessian.
pub fn solve_newton_tr<T: Scalar, F: AmbientFunction<T> + ?Sized>(
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
    let mut radius = cfg.initial_radius;
    let mut iter = 0;
    loop {
        let egrad = f.egrad(y.coords());
        let ctx = HessianContext::new(&y, &egrad, params)?;
        let grad = ctx.rgrad.clone();
        let gnorm = metric_inner(&y, &grad, &grad, params)?.max(0.0).sqrt();
        trace.records.push(TraceRecord {
            iter,
            cost,
            gnorm,
            step: radius,
            elapsed_ms: clock.ms(),
        });
        if gnorm <= cfg.gtol {
            return Ok(SolverOutcome { point: y, trace, status: SolverStatus::Converged });
        }
        if iter >= cfg.max_iter {
            return Ok(SolverOutcome { point: y, trace, status: SolverStatus::MaxIterations });
        }
        if radius < MIN_RADIUS {
            return Ok(SolverOutcome { point: y, trace, status: SolverStatus::TrustRegionStalled });
        }
        let mut hess = |xi: &AmbientVector<T>| ctx.apply(xi, &f.ehess(y.coords(), xi));
        let tcg = truncated_cg(&y, &grad, &mut hess, radius, params, cfg)?;
        let trial = retract(&y, &tcg.step, cfg.retraction, params)?;
        let trial_cost = f.value(trial.coords());
        let model_decrease = -metric_inner(&y, &grad, &tcg.step, params)?
            - 0.5 * metric_inner(&y, &tcg.step, &tcg.hess_step, params)?;
        let slack = cost.abs().max(1.0) * f64::EPSILON * 1e3;
        let rho = (cost - trial_cost + slack) / (model_decrease + slack);
        let step_norm = metric_inner(&y, &tcg.step, &tcg.step, params)?.max(0.0).sqrt();
        if rho < 0.25 {
            radius *= 0.25;
        } else if rho > 0.75 && step_norm >= 0.99 * radius {
            radius = (2.0 * radius).min(cfg.max_radius);
        }
        if rho > cfg.accept_ratio && model_decrease >= 0.0 {
            y = trial;
            cost = trial_cost;
        }
        iter += 1;
    }
}
