use std::fmt;

use super::ExprError;

/// Expression tree in the single variable `u`. Exponents are literals.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Ln(Box<Expr>),
    Exp(Box<Expr>),
}

use Expr::*;

impl Expr {
    pub fn eval(&self, u: f64) -> Result<f64, ExprError> {
        let v = self.eval_raw(u)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::NonFinite { at: u })
        }
    }

    fn eval_raw(&self, u: f64) -> Result<f64, ExprError> {
        Ok(match self {
            Num(c) => *c,
            Var => u,
            Neg(e) => -e.eval_raw(u)?,
            Add(l, r) => l.eval_raw(u)? + r.eval_raw(u)?,
            Sub(l, r) => l.eval_raw(u)? - r.eval_raw(u)?,
            Mul(l, r) => l.eval_raw(u)? * r.eval_raw(u)?,
            Div(l, r) => l.eval_raw(u)? / r.eval_raw(u)?,
            Pow(b, c) => pow(b.eval_raw(u)?, *c),
            Ln(e) => {
                let v = e.eval_raw(u)?;
                if v <= 0.0 {
                    return Err(ExprError::LogDomain { value: v });
                }
                v.ln()
            }
            Exp(e) => e.eval_raw(u)?.exp(),
        })
    }

    /// Derivative with respect to `u`, folding constants as it goes.
    pub fn derivative(&self) -> Expr {
        match self {
            Num(_) => Num(0.0),
            Var => Num(1.0),
            Neg(e) => neg(e.derivative()),
            Add(l, r) => add(l.derivative(), r.derivative()),
            Sub(l, r) => sub(l.derivative(), r.derivative()),
            Mul(l, r) => add(
                mul(l.derivative(), (**r).clone()),
                mul((**l).clone(), r.derivative()),
            ),
            Div(l, r) => div(
                sub(
                    mul(l.derivative(), (**r).clone()),
                    mul((**l).clone(), r.derivative()),
                ),
                powi((**r).clone(), 2.0),
            ),
            Pow(b, c) => mul(mul(Num(*c), powi((**b).clone(), c - 1.0)), b.derivative()),
            Ln(e) => div(e.derivative(), (**e).clone()),
            Exp(e) => mul(e.derivative(), Exp(e.clone())),
        }
    }

    pub fn contains_ln(&self) -> bool {
        match self {
            Num(_) | Var => false,
            Ln(_) => true,
            Neg(e) | Pow(e, _) | Exp(e) => e.contains_ln(),
            Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r) => l.contains_ln() || r.contains_ln(),
        }
    }
}

fn pow(base: f64, c: f64) -> f64 {
    if c == c.trunc() && c.abs() <= i32::MAX as f64 {
        base.powi(c as i32)
    } else {
        base.powf(c)
    }
}

fn as_num(e: &Expr) -> Option<f64> {
    match e {
        Num(c) => Some(*c),
        _ => None,
    }
}

fn neg(e: Expr) -> Expr {
    match e {
        Num(c) => Num(-c),
        e => Neg(Box::new(e)),
    }
}

fn add(l: Expr, r: Expr) -> Expr {
    match (as_num(&l), as_num(&r)) {
        (Some(a), Some(b)) => Num(a + b),
        (Some(a), _) if a == 0.0 => r,
        (_, Some(b)) if b == 0.0 => l,
        _ => Add(Box::new(l), Box::new(r)),
    }
}

fn sub(l: Expr, r: Expr) -> Expr {
    match (as_num(&l), as_num(&r)) {
        (Some(a), Some(b)) => Num(a - b),
        (Some(a), _) if a == 0.0 => neg(r),
        (_, Some(b)) if b == 0.0 => l,
        _ => Sub(Box::new(l), Box::new(r)),
    }
}

fn mul(l: Expr, r: Expr) -> Expr {
    match (as_num(&l), as_num(&r)) {
        (Some(a), Some(b)) => Num(a * b),
        (Some(a), _) | (_, Some(a)) if a == 0.0 => Num(0.0),
        (Some(a), _) if a == 1.0 => r,
        (_, Some(b)) if b == 1.0 => l,
        _ => Mul(Box::new(l), Box::new(r)),
    }
}

fn div(l: Expr, r: Expr) -> Expr {
    match (as_num(&l), as_num(&r)) {
        (Some(a), Some(b)) if b != 0.0 => Num(a / b),
        (Some(a), _) if a == 0.0 => Num(0.0),
        (_, Some(b)) if b == 1.0 => l,
        _ => Div(Box::new(l), Box::new(r)),
    }
}

fn powi(b: Expr, c: f64) -> Expr {
    match (as_num(&b), c) {
        (_, c) if c == 0.0 => Num(1.0),
        (_, c) if c == 1.0 => b,
        (Some(v), c) => Num(pow(v, c)),
        _ => Pow(Box::new(b), c),
    }
}

fn write_num(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    if c < 0.0 || (c == 0.0 && c.is_sign_negative()) {
        write!(f, "(-{})", -c)
    } else {
        write!(f, "{c}")
    }
}

/// Fully parenthesised form; re-parsing the output gives back the same tree
/// for any tree produced by the parser.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num(c) => write_num(f, *c),
            Var => write!(f, "u"),
            Neg(e) => write!(f, "(-{e})"),
            Add(l, r) => write!(f, "({l} + {r})"),
            Sub(l, r) => write!(f, "({l} - {r})"),
            Mul(l, r) => write!(f, "({l} * {r})"),
            Div(l, r) => write!(f, "({l} / {r})"),
            Pow(b, c) => {
                if *c < 0.0 {
                    write!(f, "({b})^(-{})", -c)
                } else {
                    write!(f, "({b})^{c}")
                }
            }
            Ln(e) => write!(f, "ln({e})"),
            Exp(e) => write!(f, "exp({e})"),
        }
    }
}
