//! Numerical verification of the Hadamard fractional-integral identity
//! `K_f` and of the Hermite–Hadamard, Ostrowski and Simpson type bounds
//! for (α,m)-GA-convex functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Gamma, Beta, Gauss `2F1`
//! * [`quad`]: adaptive Gauss–Kronrod and the Hadamard operators
//! * [`expr`]: function input language, symbolic derivatives, catalog
//! * [`convexity`]: grid screening of the (α,m)-GA-convexity hypothesis
//! * [`constants`]: every bound constant, closed form and quadrature
//! * [`ineq`]: `K_f`, the Hermite–Hadamard chain, bounds and corollaries
//! * [`harness`]: parameter sweeps and reports

pub mod constants;
pub mod convexity;
pub mod expr;
pub mod harness;
pub mod ineq;
pub mod quad;
pub mod specfun;

use thiserror::Error;

pub use constants::InequalityParams;
pub use expr::FunctionSpec;
pub use quad::QuadratureConfig;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    SpecFun(#[from] specfun::SpecFunError),
    #[error(transparent)]
    Quad(#[from] quad::QuadError),
    #[error(transparent)]
    Expr(#[from] expr::ExprError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    Params(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
