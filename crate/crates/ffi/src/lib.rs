//! C ABI for `fixrank`.
//!
//! Conventions:
//! * matrices are dense row-major `double` arrays; complex matrices store
//!   interleaved `(re, im)` pairs, so an `r x c` complex matrix takes
//!   `2 r c` doubles;
//! * every fallible function returns an [`FrStatus`]; on failure the message
//!   is available from [`fr_last_error`] on the same thread;
//! * handles returned through `out` pointers are owned by the caller and
//!   released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fixrank::experiment::{parse_config, run_experiment, RunRecord};
use fixrank::linalg::Mat;
use fixrank::optim::SolverStatus;
use fixrank::quotient::{embed, factorize, geodesic, metric_inner, project_horizontal, rgrad};
use fixrank::{AmbientVector, Error, MetricParams, Point, Scalar};
use num_complex::Complex64;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrStatus {
    Ok = 0,
    NullPointer = 1,
    /// Bad dimensions, metric weights, configuration text or field.
    InvalidArgument = 2,
    /// Input violates a manifold constraint (orthonormality, positive
    /// definiteness, tangency, symmetry).
    NotFeasible = 3,
    RankDeficient = 4,
    /// A numerical routine failed or an internal check tripped.
    Numerical = 5,
    Io = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrField {
    Real = 0,
    Complex = 1,
}

/// Solver termination reason reported by [`fr_run_summary`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrSolverStatus {
    Converged = 0,
    MaxIterations = 1,
    LineSearchFailed = 2,
    TrustRegionStalled = 3,
}

/// The five metric weights `alpha0, alpha1, beta, gamma0, gamma1`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrMetricParams {
    pub alpha0: f64,
    pub alpha1: f64,
    pub beta: f64,
    pub gamma0: f64,
    pub gamma1: f64,
}

/// Read-only ambient vector `(U, P, V)` slots of shapes `m x p`, `p x p`,
/// `n x p`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FrAmbient {
    pub u: *const f64,
    pub p: *const f64,
    pub v: *const f64,
}

/// Writable ambient vector slots, same shapes as [`FrAmbient`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FrAmbientMut {
    pub u: *mut f64,
    pub p: *mut f64,
    pub v: *mut f64,
}

enum AnyPoint {
    Real(Point<f64>),
    Complex(Point<Complex64>),
}

/// Opaque point `(U, P, V)` of the fixed-rank manifold.
pub struct FrPoint(AnyPoint);

/// Opaque result of [`fr_solve`].
pub struct FrRun(RunRecord);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> FrStatus {
    match err {
        Error::Shape { .. }
        | Error::NotSquare { .. }
        | Error::Dimensions(_)
        | Error::MetricParams(_)
        | Error::Config(_)
        | Error::Parse { .. } => FrStatus::InvalidArgument,
        Error::NotSymmetric { .. }
        | Error::NotPositiveDefinite { .. }
        | Error::NotOrthonormal { .. }
        | Error::NotTangent { .. }
        | Error::NotAntisymmetric { .. } => FrStatus::NotFeasible,
        Error::RankDeficient { .. } => FrStatus::RankDeficient,
        Error::Io { .. } => FrStatus::Io,
        Error::Invariant(_) | Error::Json(_) => FrStatus::Numerical,
    }
}

struct Failure(FrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FrStatus::NullPointer, format!("{what} is null"))
}

/// Run `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FrStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            FrStatus::Panic
        }
    }
}

/// Conversion between row-major `double` buffers and matrices.
trait Interleave: Scalar {
    const WIDTH: usize;
    fn read(src: &[f64]) -> Self;
    fn write(self, dst: &mut [f64]);
}

impl Interleave for f64 {
    const WIDTH: usize = 1;
    fn read(src: &[f64]) -> Self {
        src[0]
    }
    fn write(self, dst: &mut [f64]) {
        dst[0] = self;
    }
}

impl Interleave for Complex64 {
    const WIDTH: usize = 2;
    fn read(src: &[f64]) -> Self {
        Complex64::new(src[0], src[1])
    }
    fn write(self, dst: &mut [f64]) {
        dst[0] = self.re;
        dst[1] = self.im;
    }
}

unsafe fn read_matrix<T: Interleave>(ptr: *const f64, rows: usize, cols: usize, what: &str) -> Result<Mat<T>, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    let data = std::slice::from_raw_parts(ptr, rows * cols * T::WIDTH);
    Ok(Mat::from_fn(rows, cols, |i, j| {
        let k = (i * cols + j) * T::WIDTH;
        T::read(&data[k..k + T::WIDTH])
    }))
}

unsafe fn write_matrix<T: Interleave>(a: &Mat<T>, ptr: *mut f64, what: &str) -> Result<(), Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    let (rows, cols) = a.shape();
    let data = std::slice::from_raw_parts_mut(ptr, rows * cols * T::WIDTH);
    for i in 0..rows {
        for j in 0..cols {
            let k = (i * cols + j) * T::WIDTH;
            a[(i, j)].write(&mut data[k..k + T::WIDTH]);
        }
    }
    Ok(())
}

unsafe fn read_ambient<T: Interleave>(y: &Point<T>, w: &FrAmbient) -> Result<AmbientVector<T>, Failure> {
    let (m, n, p) = y.dims();
    Ok(AmbientVector::new(
        read_matrix(w.u, m, p, "U slot")?,
        read_matrix(w.p, p, p, "P slot")?,
        read_matrix(w.v, n, p, "V slot")?,
    ))
}

unsafe fn write_ambient<T: Interleave>(w: &AmbientVector<T>, out: &FrAmbientMut) -> Result<(), Failure> {
    write_matrix(&w.u, out.u, "U output")?;
    write_matrix(&w.p, out.p, "P output")?;
    write_matrix(&w.v, out.v, "V output")
}

unsafe fn params_of(params: *const FrMetricParams) -> Result<MetricParams, Failure> {
    let q = params.as_ref().ok_or_else(|| null("params"))?;
    Ok(MetricParams::new(q.alpha0, q.alpha1, q.beta, q.gamma0, q.gamma1)?)
}

unsafe fn point_ref<'a>(point: *const FrPoint) -> Result<&'a AnyPoint, Failure> {
    point.as_ref().map(|p| &p.0).ok_or_else(|| null("point"))
}

unsafe fn store<H>(out: *mut *mut H, value: H) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Copy the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len` bytes). Returns the untruncated length plus one.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn fr_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Validate `(U, P, V)` and create a point. Shapes are `m x p`, `p x p`,
/// `n x p`.
///
/// # Safety
/// The slot pointers must hold the documented number of doubles; `out` must
/// be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fr_point_new(
    field: FrField,
    m: usize,
    n: usize,
    p: usize,
    factors: FrAmbient,
    out: *mut *mut FrPoint,
) -> FrStatus {
    guard(|| {
        unsafe fn build<T: Interleave>(m: usize, n: usize, p: usize, f: &FrAmbient) -> Result<Point<T>, Failure> {
            Ok(Point::new(
                read_matrix(f.u, m, p, "U")?,
                read_matrix(f.p, p, p, "P")?,
                read_matrix(f.v, n, p, "V")?,
            )?)
        }
        if p == 0 || p > m.min(n) {
            return Err(Failure(FrStatus::InvalidArgument, format!("rank {p} must be in 1..=min({m}, {n})")));
        }
        let point = match field {
            FrField::Real => AnyPoint::Real(build(m, n, p, &factors)?),
            FrField::Complex => AnyPoint::Complex(build(m, n, p, &factors)?),
        };
        store(out, FrPoint(point))
    })
}

/// Release a point; null is ignored.
///
/// # Safety
/// `point` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fr_point_free(point: *mut FrPoint) {
    if !point.is_null() {
        drop(Box::from_raw(point));
    }
}

/// Field and dimensions of a point.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_point_shape(
    point: *const FrPoint,
    field: *mut FrField,
    m: *mut usize,
    n: *mut usize,
    p: *mut usize,
) -> FrStatus {
    guard(|| {
        let (f, dims) = match point_ref(point)? {
            AnyPoint::Real(y) => (FrField::Real, y.dims()),
            AnyPoint::Complex(y) => (FrField::Complex, y.dims()),
        };
        if field.is_null() || m.is_null() || n.is_null() || p.is_null() {
            return Err(null("shape output"));
        }
        *field = f;
        (*m, *n, *p) = dims;
        Ok(())
    })
}

/// Copy the factors `(U, P, V)` of a point.
///
/// # Safety
/// The output slots must have room for the documented shapes.
#[no_mangle]
pub unsafe extern "C" fn fr_point_factors(point: *const FrPoint, out: FrAmbientMut) -> FrStatus {
    guard(|| match point_ref(point)? {
        AnyPoint::Real(y) => write_ambient(y.coords(), &out),
        AnyPoint::Complex(y) => write_ambient(y.coords(), &out),
    })
}

/// The `m x n` matrix `U P Vᵗ`.
///
/// # Safety
/// `out` must have room for `m n` entries of the point's field.
#[no_mangle]
pub unsafe extern "C" fn fr_embed(point: *const FrPoint, out: *mut f64) -> FrStatus {
    guard(|| match point_ref(point)? {
        AnyPoint::Real(y) => write_matrix(&embed(y), out, "out"),
        AnyPoint::Complex(y) => write_matrix(&embed(y), out, "out"),
    })
}

/// Rank-`p` factorization of the `m x n` matrix `f` by truncated SVD.
///
/// # Safety
/// `f` must hold `m n` entries of the given field; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_factorize(
    field: FrField,
    m: usize,
    n: usize,
    f: *const f64,
    p: usize,
    out: *mut *mut FrPoint,
) -> FrStatus {
    guard(|| {
        let point = match field {
            FrField::Real => AnyPoint::Real(factorize(&read_matrix::<f64>(f, m, n, "f")?, p)?),
            FrField::Complex => AnyPoint::Complex(factorize(&read_matrix::<Complex64>(f, m, n, "f")?, p)?),
        };
        store(out, FrPoint(point))
    })
}

/// g-orthogonal projection of an ambient vector onto the horizontal space.
///
/// # Safety
/// Input and output slots must match the point's shapes and field.
#[no_mangle]
pub unsafe extern "C" fn fr_project_horizontal(
    point: *const FrPoint,
    params: *const FrMetricParams,
    w: FrAmbient,
    out: FrAmbientMut,
) -> FrStatus {
    guard(|| {
        let q = params_of(params)?;
        match point_ref(point)? {
            AnyPoint::Real(y) => write_ambient(&project_horizontal(y, &read_ambient(y, &w)?, &q)?, &out),
            AnyPoint::Complex(y) => write_ambient(&project_horizontal(y, &read_ambient(y, &w)?, &q)?, &out),
        }
    })
}

/// Riemannian gradient from the Euclidean gradient of a cost in `(U, P, V)`.
///
/// # Safety
/// Input and output slots must match the point's shapes and field.
#[no_mangle]
pub unsafe extern "C" fn fr_rgrad(
    point: *const FrPoint,
    params: *const FrMetricParams,
    egrad: FrAmbient,
    out: FrAmbientMut,
) -> FrStatus {
    guard(|| {
        let q = params_of(params)?;
        match point_ref(point)? {
            AnyPoint::Real(y) => write_ambient(&rgrad(y, &read_ambient(y, &egrad)?, &q)?, &out),
            AnyPoint::Complex(y) => write_ambient(&rgrad(y, &read_ambient(y, &egrad)?, &q)?, &out),
        }
    })
}

/// Metric inner product of two ambient vectors at a point.
///
/// # Safety
/// Input slots must match the point's shapes and field; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_metric_inner(
    point: *const FrPoint,
    params: *const FrMetricParams,
    a: FrAmbient,
    b: FrAmbient,
    out: *mut f64,
) -> FrStatus {
    guard(|| {
        let q = params_of(params)?;
        let value = match point_ref(point)? {
            AnyPoint::Real(y) => metric_inner(y, &read_ambient(y, &a)?, &read_ambient(y, &b)?, &q)?,
            AnyPoint::Complex(y) => metric_inner(y, &read_ambient(y, &a)?, &read_ambient(y, &b)?, &q)?,
        };
        *out.as_mut().ok_or_else(|| null("out"))? = value;
        Ok(())
    })
}

/// Point reached at time `t` along the geodesic with horizontal initial
/// velocity `eta`.
///
/// # Safety
/// `eta` slots must match the point's shapes and field; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_geodesic(
    point: *const FrPoint,
    params: *const FrMetricParams,
    eta: FrAmbient,
    t: f64,
    out: *mut *mut FrPoint,
) -> FrStatus {
    guard(|| {
        let q = params_of(params)?;
        let next = match point_ref(point)? {
            AnyPoint::Real(y) => AnyPoint::Real(geodesic(y, &read_ambient(y, &eta)?, t, &q)?),
            AnyPoint::Complex(y) => AnyPoint::Complex(geodesic(y, &read_ambient(y, &eta)?, t, &q)?),
        };
        store(out, FrPoint(next))
    })
}

/// Run an experiment described by configuration text (`key = value` lines,
/// the format accepted by the `fixrank` command line tool). Nothing is
/// written to disk.
///
/// # Safety
/// `config` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_solve(config: *const c_char, out: *mut *mut FrRun) -> FrStatus {
    guard(|| {
        if config.is_null() {
            return Err(null("config"));
        }
        let text = CStr::from_ptr(config)
            .to_str()
            .map_err(|e| Failure(FrStatus::InvalidArgument, format!("config is not UTF-8: {e}")))?;
        let cfg = parse_config(text)?;
        store(out, FrRun(run_experiment(&cfg)?))
    })
}

/// Release a run; null is ignored.
///
/// # Safety
/// `run` must come from [`fr_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fr_run_free(run: *mut FrRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Summary numbers of a run. `gap` is NaN when no optimal value is known.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_run_summary(
    run: *const FrRun,
    status: *mut FrSolverStatus,
    iterations: *mut usize,
    final_cost: *mut f64,
    final_gnorm: *mut f64,
    gap: *mut f64,
) -> FrStatus {
    guard(|| {
        let r = &run.as_ref().ok_or_else(|| null("run"))?.0;
        if status.is_null() || iterations.is_null() || final_cost.is_null() || final_gnorm.is_null() || gap.is_null() {
            return Err(null("summary output"));
        }
        *status = match r.status {
            SolverStatus::Converged => FrSolverStatus::Converged,
            SolverStatus::MaxIterations => FrSolverStatus::MaxIterations,
            SolverStatus::LineSearchFailed => FrSolverStatus::LineSearchFailed,
            SolverStatus::TrustRegionStalled => FrSolverStatus::TrustRegionStalled,
        };
        *iterations = r.iterations;
        *final_cost = r.final_cost;
        *final_gnorm = r.final_gnorm;
        *gap = r.relative_gap.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Copy the run record as JSON into `buf` (NUL-terminated, truncated to
/// `len` bytes). `needed` receives the full length plus one.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes; `needed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fr_run_json(run: *const FrRun, buf: *mut c_char, len: usize, needed: *mut usize) -> FrStatus {
    guard(|| {
        let r = &run.as_ref().ok_or_else(|| null("run"))?.0;
        let json = r.to_json()?;
        let bytes = json.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        *needed.as_mut().ok_or_else(|| null("needed"))? = bytes.len() + 1;
        Ok(())
    })
}
