//! A small expression language in one variable `u`, with exact symbolic
//! differentiation.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' exponent)?
//! atom   := number | 'u' | 'ln' '(' expr ')' | 'exp' '(' expr ')' | '(' expr ')'
//! exponent := '-'? number | '(' '-'? number ')'
//! ```

mod ast;
pub mod catalog;
mod function;
mod parser;

pub use ast::Expr;
pub use function::{ConvexityHint, FunctionSpec, ScalarFn};
pub use parser::parse;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown identifier `{name}` at column {column}")]
    UnknownIdentifier { name: String, column: usize },
    #[error("ln of non-positive value {value}")]
    LogDomain { value: f64 },
    #[error("evaluation at u = {at} produced a non-finite value")]
    NonFinite { at: f64 },
    #[error("u = {at} is outside the function domain [{lo}, {hi}]")]
    OutsideDomain { at: f64, lo: f64, hi: f64 },
}

/// Symbolic derivative with respect to `u`.
pub fn diff(e: &Expr) -> Expr {
    e.derivative()
}

/// Evaluates `e` at `u`.
pub fn eval(e: &Expr, u: f64) -> Result<f64, ExprError> {
    e.eval(u)
}
