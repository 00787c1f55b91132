use thiserror::Error;

/// Errors surfaced by the geometry, solvers and I/O front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {context}: expected {expected:?}, got {got:?}")]
    Shape {
        context: &'static str,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("{context}: matrix is not square ({rows}x{cols})")]
    NotSquare {
        context: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("{context}: symmetry residual {residual:e} exceeds tolerance")]
    NotSymmetric { context: &'static str, residual: f64 },
    #[error("{context}: matrix is not positive definite (min eigenvalue {min_eig:e}, max {max_eig:e})")]
    NotPositiveDefinite {
        context: &'static str,
        min_eig: f64,
        max_eig: f64,
    },
    #[error("{context}: orthonormality residual {residual:e} exceeds tolerance")]
    NotOrthonormal { context: &'static str, residual: f64 },
    #[error("{context}: tangency residual {residual:e} exceeds tolerance")]
    NotTangent { context: &'static str, residual: f64 },
    #[error("{context}: matrix is not antisymmetric (residual {residual:e})")]
    NotAntisymmetric { context: &'static str, residual: f64 },
    #[error("numerical rank below {p} (sigma_p / sigma_1 = {ratio:e})")]
    RankDeficient { p: usize, ratio: f64 },
    #[error("invalid dimensions: {0}")]
    Dimensions(String),
    #[error("invalid metric parameters: {0}")]
    MetricParams(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
