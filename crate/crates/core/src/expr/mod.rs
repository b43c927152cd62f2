//! A small real-valued expression language in one variable `x`, with exact
//! symbolic differentiation.
//!
//! ```
//! let f = quadext::parse("max(x - 0.2, 0)^4").unwrap();
//! assert_eq!(f.eval(0.0).unwrap(), 0.0);
//! let d = f.differentiate(1);
//! assert!(d.kink);
//! ```

mod diff;
mod parse;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use diff::Derivative;
pub use parse::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Abs,
    Sqrt,
    /// Right-continuous Heaviside step: `1` for `u ≥ 0`, else `0`. Produced
    /// by differentiating `abs` and `max`.
    Step,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Step => "step",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "step" => Func::Step,
            _ => return None,
        })
    }

    fn apply(self, u: f64) -> Option<f64> {
        match self {
            Func::Exp => Some(u.exp()),
            Func::Log if u > 0.0 => Some(u.ln()),
            Func::Log => None,
            Func::Sin => Some(u.sin()),
            Func::Cos => Some(u.cos()),
            Func::Abs => Some(u.abs()),
            Func::Sqrt if u >= 0.0 => Some(u.sqrt()),
            Func::Sqrt => None,
            Func::Step => Some(if u >= 0.0 { 1.0 } else { 0.0 }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

/// Syntax tree of a real function of `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    X,
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Integer power.
    Pow(Box<Expr>, i32),
    Max(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EvalErrorKind {
    DivisionByZero,
    LogOfNonPositive,
    SqrtOfNegative,
    NonFinite,
}

impl fmt::Display for EvalErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalErrorKind::DivisionByZero => "division by zero",
            EvalErrorKind::LogOfNonPositive => "log of a nonpositive number",
            EvalErrorKind::SqrtOfNegative => "square root of a negative number",
            EvalErrorKind::NonFinite => "non-finite result",
        })
    }
}

/// A domain error raised while evaluating an expression.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} in `{subexpr}` at x = {x}")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub subexpr: String,
    pub x: f64,
}

impl EvalError {
    #[cfg(test)]
    pub(crate) fn test_failure(x: f64) -> Self {
        EvalError {
            kind: EvalErrorKind::NonFinite,
            subexpr: String::from("test"),
            x,
        }
    }
}

impl Expr {
    pub fn constant(v: f64) -> Self {
        Expr::Const(v)
    }

    /// Evaluates at `x` in IEEE double precision.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let fail = |kind, e: &Expr| EvalError {
            kind,
            subexpr: e.to_string(),
            x,
        };
        let v = match self {
            Expr::Const(c) => *c,
            Expr::X => x,
            Expr::Neg(u) => -u.eval(x)?,
            Expr::Call(func, u) => {
                let arg = u.eval(x)?;
                func.apply(arg).ok_or_else(|| {
                    let kind = match func {
                        Func::Log => EvalErrorKind::LogOfNonPositive,
                        _ => EvalErrorKind::SqrtOfNegative,
                    };
                    fail(kind, self)
                })?
            }
            Expr::Binary(op, a, b) => {
                let (l, r) = (a.eval(x)?, b.eval(x)?);
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div if r == 0.0 => {
                        return Err(fail(EvalErrorKind::DivisionByZero, self))
                    }
                    BinOp::Div => l / r,
                }
            }
            Expr::Pow(u, k) => {
                let base = u.eval(x)?;
                if *k < 0 && base == 0.0 {
                    return Err(fail(EvalErrorKind::DivisionByZero, self));
                }
                base.powi(*k)
            }
            Expr::Max(a, b) => a.eval(x)?.max(b.eval(x)?),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(fail(EvalErrorKind::NonFinite, self))
        }
    }

    /// True if the tree contains `abs`, `max` or `step`.
    pub fn has_kinks(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::X => false,
            Expr::Call(Func::Abs | Func::Step, _) | Expr::Max(..) => true,
            Expr::Neg(u) | Expr::Call(_, u) | Expr::Pow(u, _) => u.has_kinks(),
            Expr::Binary(_, a, b) => a.has_kinks() || b.has_kinks(),
        }
    }

    pub fn is_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }
}

/// Canonical, fully parenthesized form that [`parse`] reads back.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => {
                write!(f, "(-{:?})", -c)
            }
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::X => f.write_str("x"),
            Expr::Neg(u) => write!(f, "(-{u})"),
            Expr::Call(func, u) => write!(f, "{}({u})", func.name()),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Pow(u, k) => write!(f, "({u}^{k})"),
            Expr::Max(a, b) => write!(f, "max({a}, {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_basic_forms() {
        assert_eq!(parse("x^2").unwrap().eval(0.5).unwrap(), 0.25);
        let e = parse("exp(x)").unwrap();
        assert_eq!(e.eval(1.0).unwrap(), std::f64::consts::E);
        let s3 = 3f64.sqrt() / 3.0;
        assert_eq!(e.eval(s3).unwrap(), s3.exp());
        assert!((e.eval(s3).unwrap() - 1.781312).abs() < 1e-6);
    }

    #[test]
    fn domain_errors_are_reported() {
        let err = parse("1/x").unwrap().eval(0.0).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::DivisionByZero);
        assert_eq!(err.subexpr, "(1.0 / x)");
        let err = parse("2 + log(x - 1)").unwrap().eval(0.5).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::LogOfNonPositive);
        assert!(err.subexpr.starts_with("log("));
        assert_eq!(
            parse("sqrt(x)").unwrap().eval(-0.1).unwrap_err().kind,
            EvalErrorKind::SqrtOfNegative
        );
        assert_eq!(
            parse("x^-2").unwrap().eval(0.0).unwrap_err().kind,
            EvalErrorKind::DivisionByZero
        );
    }

    #[test]
    fn truncated_power() {
        let e = parse("max(x - 0.2, 0)^4").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 0.0);
        assert!((e.eval(0.7).unwrap() - 0.0625).abs() < 1e-15);
        assert!(e.has_kinks());
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "-x^2 + 3*x",
            "exp(-2*x)/(1+x^2)",
            "max(x, -0.5) - abs(x)",
            "x^-3",
            "-1e-7*pi",
        ] {
            let e = parse(src).unwrap();
            let again = parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{src}");
        }
    }
}
