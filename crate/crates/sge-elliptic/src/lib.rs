//! Elliptic-function toolkit for the N=1 sine-Gordon equation.
//!
//! The crate evaluates the breather and kink solutions of `q_tt + sin q = 0`
//! both through Jacobi elliptic functions and through Jacobi theta functions,
//! and ships the Landen, modular and reciprocal transformations that connect
//! the two forms. Every identity is exposed as a residual so callers (and the
//! `sge-elliptic` binary) can report how well it holds numerically.

// `!(x > 0.0)` is the idiom used to reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bridge;
#[cfg(feature = "cli")]
pub mod cli;
pub mod elliptic;
pub mod error;
pub mod format;
pub mod jacobi;
pub mod quad;
pub mod solutions;
pub mod theta;
pub mod transforms;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type Cplx = num_complex::Complex64;

pub(crate) const I: Cplx = Cplx::new(0.0, 1.0);

pub(crate) fn c(re: f64) -> Cplx {
    Cplx::new(re, 0.0)
}

pub(crate) fn ensure_finite(z: Cplx, what: &str) -> Result<Cplx> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonConvergence(format!("{what} is not finite")))
    }
}
