//! Cost functions on a neighborhood of the total space in ℰ, the
//! index-raising helper, and finite-difference verification oracles.

mod fd;
mod function;
mod xtrace;

pub use fd::{fd_check_gradient, fd_check_hessian, FdReport};
pub use function::{AmbientFunction, ConstantFunction, LinearFunction};
pub use xtrace::{koszul_oracle, raise, xtrace_rule, TraceTerm, XtraceForm};
