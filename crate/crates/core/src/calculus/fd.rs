use serde::Serialize;

use crate::linalg::{rand_ambient, seeded_rng};
use crate::scalar::Scalar;
use crate::vector::{AmbientVector, Slot};

use super::AmbientFunction;

/// Outcome of a finite-difference comparison.
#[derive(Debug, Clone, Serialize)]
pub struct FdReport {
    pub max_rel_error: f64,
    /// Effective central-difference steps, one per trial direction.
    pub steps: Vec<f64>,
    /// Worst error for directions confined to the U, P and V slots.
    pub per_slot: [f64; 3],
}

impl FdReport {
    fn record(&mut self, slot: Option<Slot>, err: f64, step: f64) {
        let err = if err.is_finite() { err } else { f64::INFINITY };
        self.max_rel_error = self.max_rel_error.max(err);
        self.steps.push(step);
        if let Some(s) = slot {
            let k = Slot::ALL.iter().position(|&x| x == s).unwrap();
            self.per_slot[k] = self.per_slot[k].max(err);
        }
    }
}

fn directions<T: Scalar>(y: &AmbientVector<T>, trials: usize, seed: u64) -> Vec<(Option<Slot>, AmbientVector<T>)> {
    let (m, n, p) = y.dims();
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(trials + 3 * trials);
    for _ in 0..trials {
        let w = rand_ambient::<T, _>(m, n, p, &mut rng).expect("dims come from y");
        for slot in Slot::ALL {
            out.push((Some(slot), w.restrict(slot)));
        }
        out.push((None, w));
    }
    out
}

/// `h` scaled by `‖Y‖/‖ω‖`.
fn step_for<T: Scalar>(y: &AmbientVector<T>, w: &AmbientVector<T>, h: f64) -> f64 {
    h * y.norm().max(1.0) / w.norm().max(f64::MIN_POSITIVE)
}

/// Central differences of `value` along random ambient directions against
/// `⟨egrad, ω⟩_ℰ`. Errors are relative to `‖egrad‖‖ω‖`.
pub fn fd_check_gradient<T: Scalar, F: AmbientFunction<T> + ?Sized>(
    f: &F,
    y: &AmbientVector<T>,
    trials: usize,
    h: f64,
    seed: u64,
) -> FdReport {
    let mut report = FdReport {
        max_rel_error: 0.0,
        steps: Vec::new(),
        per_slot: [0.0; 3],
    };
    let g = f.egrad(y);
    for (slot, w) in directions(y, trials, seed) {
        let s = step_for(y, &w, h);
        let mut fwd = y.clone();
        fwd.axpy(s, &w);
        let mut bwd = y.clone();
        bwd.axpy(-s, &w);
        let fd = (f.value(&fwd) - f.value(&bwd)) / (2.0 * s);
        let exact = g.inner(&w);
        let diff = (fd - exact).abs();
        let err = if diff == 0.0 { 0.0 } else { diff / (g.norm() * w.norm()).max(f64::MIN_POSITIVE) };
        report.record(slot, err, s);
    }
    report
}

/// Central differences of `egrad` against `ehess` along random directions.
pub fn fd_check_hessian<T: Scalar, F: AmbientFunction<T> + ?Sized>(
    f: &F,
    y: &AmbientVector<T>,
    trials: usize,
    h: f64,
    seed: u64,
) -> FdReport {
    let mut report = FdReport {
        max_rel_error: 0.0,
        steps: Vec::new(),
        per_slot: [0.0; 3],
    };
    for (slot, w) in directions(y, trials, seed) {
        let s = step_for(y, &w, h);
        let mut fwd = y.clone();
        fwd.axpy(s, &w);
        let mut bwd = y.clone();
        bwd.axpy(-s, &w);
        let fd = (f.egrad(&fwd) - f.egrad(&bwd)).scale(0.5 / s);
        let exact = f.ehess(y, &w);
        let diff = (&fd - &exact).norm();
        let err = if diff == 0.0 {
            0.0
        } else {
            diff / exact.norm().max(fd.norm()).max(f64::MIN_POSITIVE)
        };
        report.record(slot, err, s);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{ConstantFunction, LinearFunction};
    use num_complex::Complex64;

    #[test]
    fn constant_and_linear_costs() {
        let mut rng = seeded_rng(60);
        let y = rand_ambient::<Complex64, _>(5, 4, 2, &mut rng).unwrap();
        let c = ConstantFunction(3.5);
        assert_eq!(fd_check_gradient(&c, &y, 3, 1e-5, 1).max_rel_error, 0.0);
        assert_eq!(fd_check_hessian(&c, &y, 3, 1e-5, 1).max_rel_error, 0.0);
        let lin = LinearFunction(rand_ambient::<Complex64, _>(5, 4, 2, &mut rng).unwrap());
        assert!(fd_check_gradient(&lin, &y, 3, 1e-5, 2).max_rel_error < 1e-9);
        assert_eq!(fd_check_hessian(&lin, &y, 3, 1e-5, 2).max_rel_error, 0.0);
    }

    #[test]
    fn detects_wrong_gradient() {
        struct Wrong;
        impl AmbientFunction<f64> for Wrong {
            fn value(&self, y: &AmbientVector<f64>) -> f64 {
                0.5 * y.inner(y)
            }
            fn egrad(&self, y: &AmbientVector<f64>) -> AmbientVector<f64> {
                y.scale(2.0)
            }
            fn ehess(&self, _y: &AmbientVector<f64>, xi: &AmbientVector<f64>) -> AmbientVector<f64> {
                xi.clone()
            }
        }
        let y = rand_ambient::<f64, _>(4, 3, 2, &mut seeded_rng(61)).unwrap();
        assert!(fd_check_gradient(&Wrong, &y, 2, 1e-5, 3).max_rel_error > 0.1);
        assert!(fd_check_hessian(&Wrong, &y, 2, 1e-5, 3).max_rel_error > 0.1);
    }
}
