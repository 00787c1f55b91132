use std::ffi::{CStr, CString};
use std::ptr;

use fixrank_ffi::*;

const PARAMS: FrMetricParams = FrMetricParams {
    alpha0: 1.0,
    alpha1: 0.7,
    beta: 1.3,
    gamma0: 0.9,
    gamma1: 0.4,
};

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 512];
    unsafe {
        fr_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

/// Row-major `m x n` matrix with entries `f(i, j)`, interleaved when complex.
fn matrix(m: usize, n: usize, width: usize, f: impl Fn(usize, usize, usize) -> f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(m * n * width);
    for i in 0..m {
        for j in 0..n {
            for k in 0..width {
                out.push(f(i, j, k));
            }
        }
    }
    out
}

fn factorized(field: FrField, m: usize, n: usize, p: usize) -> *mut FrPoint {
    let width = if field == FrField::Complex { 2 } else { 1 };
    let f = matrix(m, n, width, |i, j, k| {
        let s = (0..p).map(|r| ((i + 2 * r + k) as f64).sin() * ((j * (r + 1) + 1) as f64).cos()).sum::<f64>();
        s + if i == j && i < p { 2.0 } else { 0.0 }
    });
    let mut y = ptr::null_mut();
    let status = unsafe { fr_factorize(field, m, n, f.as_ptr(), p, &mut y) };
    assert_eq!(status, FrStatus::Ok, "{}", last_error());
    y
}

struct Slots {
    u: Vec<f64>,
    p: Vec<f64>,
    v: Vec<f64>,
}

impl Slots {
    fn zeros(m: usize, n: usize, p: usize, width: usize) -> Self {
        Slots {
            u: vec![0.0; m * p * width],
            p: vec![0.0; p * p * width],
            v: vec![0.0; n * p * width],
        }
    }

    fn filled(m: usize, n: usize, p: usize, width: usize, seed: f64) -> Self {
        let g = |rows, off: f64| matrix(rows, p, width, |i, j, k| ((i * 7 + j * 3 + k) as f64 * 0.37 + seed + off).sin());
        Slots { u: g(m, 0.0), p: g(p, 1.0), v: g(n, 2.0) }
    }

    fn view(&self) -> FrAmbient {
        FrAmbient { u: self.u.as_ptr(), p: self.p.as_ptr(), v: self.v.as_ptr() }
    }

    fn view_mut(&mut self) -> FrAmbientMut {
        FrAmbientMut { u: self.u.as_mut_ptr(), p: self.p.as_mut_ptr(), v: self.v.as_mut_ptr() }
    }
}

fn shape(y: *const FrPoint) -> (FrField, usize, usize, usize) {
    let (mut f, mut m, mut n, mut p) = (FrField::Real, 0, 0, 0);
    assert_eq!(unsafe { fr_point_shape(y, &mut f, &mut m, &mut n, &mut p) }, FrStatus::Ok);
    (f, m, n, p)
}

#[test]
fn factorize_then_embed_reproduces_the_rank_p_matrix() {
    for field in [FrField::Real, FrField::Complex] {
        let width = if field == FrField::Complex { 2 } else { 1 };
        let y = factorized(field, 6, 5, 2);
        assert_eq!(shape(y), (field, 6, 5, 2));
        let mut f = vec![0.0; 6 * 5 * width];
        assert_eq!(unsafe { fr_embed(y, f.as_mut_ptr()) }, FrStatus::Ok);

        let mut z = ptr::null_mut();
        assert_eq!(unsafe { fr_factorize(field, 6, 5, f.as_ptr(), 2, &mut z) }, FrStatus::Ok);
        let mut g = vec![0.0; f.len()];
        assert_eq!(unsafe { fr_embed(z, g.as_mut_ptr()) }, FrStatus::Ok);
        let err = f.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{field:?}: {err}");
        unsafe {
            fr_point_free(y);
            fr_point_free(z);
        }
    }
}

#[test]
fn point_new_round_trips_factors_and_rejects_infeasible_input() {
    for field in [FrField::Real, FrField::Complex] {
        let width = if field == FrField::Complex { 2 } else { 1 };
        let y = factorized(field, 5, 4, 2);
        let mut s = Slots::zeros(5, 4, 2, width);
        assert_eq!(unsafe { fr_point_factors(y, s.view_mut()) }, FrStatus::Ok);

        let mut z = ptr::null_mut();
        assert_eq!(unsafe { fr_point_new(field, 5, 4, 2, s.view(), &mut z) }, FrStatus::Ok);
        let mut t = Slots::zeros(5, 4, 2, width);
        assert_eq!(unsafe { fr_point_factors(z, t.view_mut()) }, FrStatus::Ok);
        assert_eq!((&s.u, &s.p, &s.v), (&t.u, &t.p, &t.v));

        s.u[0] += 0.5;
        let mut bad = ptr::null_mut();
        assert_eq!(unsafe { fr_point_new(field, 5, 4, 2, s.view(), &mut bad) }, FrStatus::NotFeasible);
        assert!(bad.is_null());
        assert!(!last_error().is_empty());
        unsafe {
            fr_point_free(y);
            fr_point_free(z);
        }
    }
}

#[test]
fn invalid_arguments_map_to_status_codes() {
    let mut y = ptr::null_mut();
    let s = Slots::zeros(4, 4, 5, 1);
    assert_eq!(unsafe { fr_point_new(FrField::Real, 4, 4, 5, s.view(), &mut y) }, FrStatus::InvalidArgument);
    assert!(last_error().contains("rank"));

    let zero = vec![0.0; 12];
    assert_eq!(unsafe { fr_factorize(FrField::Real, 4, 3, zero.as_ptr(), 2, &mut y) }, FrStatus::RankDeficient);
    assert_eq!(unsafe { fr_factorize(FrField::Real, 4, 3, ptr::null(), 2, &mut y) }, FrStatus::NullPointer);

    let p = factorized(FrField::Real, 4, 3, 2);
    let bad = FrMetricParams { beta: -1.0, ..PARAMS };
    let w = Slots::filled(4, 3, 2, 1, 0.0);
    let mut out = Slots::zeros(4, 3, 2, 1);
    assert_eq!(unsafe { fr_project_horizontal(p, &bad, w.view(), out.view_mut()) }, FrStatus::InvalidArgument);
    assert_eq!(unsafe { fr_project_horizontal(p, ptr::null(), w.view(), out.view_mut()) }, FrStatus::NullPointer);
    unsafe { fr_point_free(p) };
}

#[test]
fn horizontal_projection_is_idempotent_and_gradient_matches_pairing() {
    for field in [FrField::Real, FrField::Complex] {
        let width = if field == FrField::Complex { 2 } else { 1 };
        let (m, n, p) = (7, 5, 3);
        let y = factorized(field, m, n, p);
        let w = Slots::filled(m, n, p, width, 0.3);

        let mut h = Slots::zeros(m, n, p, width);
        let mut hh = Slots::zeros(m, n, p, width);
        unsafe {
            assert_eq!(fr_project_horizontal(y, &PARAMS, w.view(), h.view_mut()), FrStatus::Ok);
            assert_eq!(fr_project_horizontal(y, &PARAMS, h.view(), hh.view_mut()), FrStatus::Ok);
        }
        let diff = [(&h.u, &hh.u), (&h.p, &hh.p), (&h.v, &hh.v)]
            .iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        assert!(diff < 1e-10, "{field:?}: {diff}");

        // g(rgrad, h) equals the Euclidean pairing of the gradient with h.
        let egrad = Slots::filled(m, n, p, width, 1.7);
        let mut g = Slots::zeros(m, n, p, width);
        let mut lhs = 0.0;
        unsafe {
            assert_eq!(fr_rgrad(y, &PARAMS, egrad.view(), g.view_mut()), FrStatus::Ok);
            assert_eq!(fr_metric_inner(y, &PARAMS, g.view(), h.view(), &mut lhs), FrStatus::Ok);
        }
        let rhs: f64 = [(&egrad.u, &h.u), (&egrad.p, &h.p), (&egrad.v, &h.v)]
            .iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| x * y))
            .sum();
        assert!((lhs - rhs).abs() < 1e-9 * rhs.abs().max(1.0), "{field:?}: {lhs} vs {rhs}");
        unsafe { fr_point_free(y) };
    }
}

#[test]
fn geodesic_requires_tangent_velocity() {
    for field in [FrField::Real, FrField::Complex] {
        let width = if field == FrField::Complex { 2 } else { 1 };
        let y = factorized(field, 6, 4, 2);
        let w = Slots::filled(6, 4, 2, width, 0.9);
        let mut h = Slots::zeros(6, 4, 2, width);
        assert_eq!(unsafe { fr_project_horizontal(y, &PARAMS, w.view(), h.view_mut()) }, FrStatus::Ok);

        let mut z = ptr::null_mut();
        assert_eq!(unsafe { fr_geodesic(y, &PARAMS, h.view(), 0.1, &mut z) }, FrStatus::Ok);
        assert_eq!(shape(z), (field, 6, 4, 2));
        let mut z0 = ptr::null_mut();
        assert_eq!(unsafe { fr_geodesic(y, &PARAMS, h.view(), 0.0, &mut z0) }, FrStatus::Ok);
        let (mut a, mut b) = (vec![0.0; 24 * width], vec![0.0; 24 * width]);
        unsafe {
            fr_embed(y, a.as_mut_ptr());
            fr_embed(z0, b.as_mut_ptr());
        }
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));

        let mut bad = ptr::null_mut();
        assert_eq!(unsafe { fr_geodesic(y, &PARAMS, w.view(), 0.1, &mut bad) }, FrStatus::NotFeasible);
        unsafe {
            fr_point_free(y);
            fr_point_free(z);
            fr_point_free(z0);
        }
    }
}

#[test]
fn solve_runs_a_configured_experiment() {
    let cfg = CString::new("kind = lowrank-approx\nfield = complex\nm = 10\nn = 8\np = 2\nmethod = newton\nseed = 3\n").unwrap();
    let mut run = ptr::null_mut();
    assert_eq!(unsafe { fr_solve(cfg.as_ptr(), &mut run) }, FrStatus::Ok, "{}", last_error());

    let (mut status, mut iters, mut cost, mut gnorm, mut gap) = (FrSolverStatus::MaxIterations, 0, 0.0, 0.0, 0.0);
    assert_eq!(unsafe { fr_run_summary(run, &mut status, &mut iters, &mut cost, &mut gnorm, &mut gap) }, FrStatus::Ok);
    assert_eq!(status, FrSolverStatus::Converged);
    assert!(iters > 0 && gap <= 1e-8, "{iters} {gap}");

    let mut needed = 0;
    assert_eq!(unsafe { fr_run_json(run, ptr::null_mut(), 0, &mut needed) }, FrStatus::Ok);
    let mut buf = vec![0 as std::ffi::c_char; needed];
    assert_eq!(unsafe { fr_run_json(run, buf.as_mut_ptr(), needed, &mut needed) }, FrStatus::Ok);
    let json = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert!(json.starts_with('{') && json.contains("\"iterations\""));
    unsafe { fr_run_free(run) };

    let bad = CString::new("kind = nope\n").unwrap();
    assert_eq!(unsafe { fr_solve(bad.as_ptr(), &mut run) }, FrStatus::InvalidArgument);
    assert!(last_error().contains("line 1"), "{}", last_error());
}

#[test]
fn last_error_truncates_and_reports_full_length() {
    let mut y = ptr::null_mut();
    unsafe { fr_factorize(FrField::Real, 2, 2, ptr::null(), 1, &mut y) };
    let full = unsafe { fr_last_error(ptr::null_mut(), 0) };
    let mut buf = [0 as std::ffi::c_char; 4];
    assert_eq!(unsafe { fr_last_error(buf.as_mut_ptr(), 4) }, full);
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_bytes().len(), 3);
    assert!(unsafe { CStr::from_ptr(fr_version()) }.to_str().unwrap().starts_with("0."));
}
