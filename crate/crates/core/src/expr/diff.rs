//! Symbolic differentiation with constant folding.
//!
//! `abs` and `max` are differentiated with the right-derivative convention:
//! `d|u| = (2 step(u) - 1) u'` and `d max(u, v) = step(u - v) u' + (1 - step(u - v)) v'`,
//! where `step` is right-continuous. `step` itself differentiates to zero.
//! Any of these rules sets the `kink` flag on the result.

use super::{BinOp, Expr, Func};

/// Result of [`Expr::differentiate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub expr: Expr,
    /// Set when a one-sided convention was used somewhere in the chain.
    pub kink: bool,
}

fn c(v: f64) -> Expr {
    Expr::Const(v)
}

fn fold(v: f64, fallback: impl FnOnce() -> Expr) -> Expr {
    if v.is_finite() {
        Expr::Const(v)
    } else {
        fallback()
    }
}

fn neg(u: Expr) -> Expr {
    match u {
        Expr::Const(a) => c(-a),
        Expr::Neg(inner) => *inner,
        u => Expr::Neg(Box::new(u)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a.is_const(), b.is_const()) {
        (Some(x), Some(y)) => fold(x + y, || {
            Expr::Binary(BinOp::Add, Box::new(a.clone()), Box::new(b.clone()))
        }),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Expr::Binary(BinOp::Add, Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a.is_const(), b.is_const()) {
        (Some(x), Some(y)) => fold(x - y, || {
            Expr::Binary(BinOp::Sub, Box::new(a.clone()), Box::new(b.clone()))
        }),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => Expr::Binary(BinOp::Sub, Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a.is_const(), b.is_const()) {
        (Some(x), Some(y)) => fold(x * y, || {
            Expr::Binary(BinOp::Mul, Box::new(a.clone()), Box::new(b.clone()))
        }),
        (Some(0.0), _) | (_, Some(0.0)) => c(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        (Some(-1.0), _) => neg(b),
        (_, Some(-1.0)) => neg(a),
        _ => Expr::Binary(BinOp::Mul, Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a.is_const(), b.is_const()) {
        (Some(x), Some(y)) if y != 0.0 => fold(x / y, || {
            Expr::Binary(BinOp::Div, Box::new(a.clone()), Box::new(b.clone()))
        }),
        (Some(0.0), _) => c(0.0),
        (_, Some(1.0)) => a,
        _ => Expr::Binary(BinOp::Div, Box::new(a), Box::new(b)),
    }
}

fn pow(u: Expr, k: i32) -> Expr {
    match (k, u.is_const()) {
        (0, _) => c(1.0),
        (1, _) => u,
        (_, Some(b)) if b != 0.0 || k > 0 => fold(b.powi(k), || Expr::Pow(Box::new(u.clone()), k)),
        _ => Expr::Pow(Box::new(u), k),
    }
}

fn call(func: Func, u: Expr) -> Expr {
    Expr::Call(func, Box::new(u))
}

fn step(u: Expr) -> Expr {
    match u.is_const() {
        Some(v) => c(if v >= 0.0 { 1.0 } else { 0.0 }),
        None => call(Func::Step, u),
    }
}

/// One differentiation step. Returns the derivative and whether a
/// one-sided rule was applied.
fn d(e: &Expr) -> (Expr, bool) {
    match e {
        Expr::Const(_) => (c(0.0), false),
        Expr::X => (c(1.0), false),
        Expr::Neg(u) => {
            let (du, k) = d(u);
            (neg(du), k)
        }
        Expr::Binary(op, a, b) => {
            let (da, ka) = d(a);
            let (db, kb) = d(b);
            let out = match op {
                BinOp::Add => add(da, db),
                BinOp::Sub => sub(da, db),
                BinOp::Mul => add(mul(da, (**b).clone()), mul((**a).clone(), db)),
                BinOp::Div => div(
                    sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                    pow((**b).clone(), 2),
                ),
            };
            (out, ka || kb)
        }
        Expr::Pow(u, k) => {
            let (du, kink) = d(u);
            let out = mul(mul(c(*k as f64), pow((**u).clone(), k - 1)), du);
            (out, kink)
        }
        Expr::Call(func, u) => {
            let (du, kink) = d(u);
            let u = (**u).clone();
            let (outer, one_sided) = match func {
                Func::Exp => (call(Func::Exp, u), false),
                Func::Log => (div(c(1.0), u), false),
                Func::Sin => (call(Func::Cos, u), false),
                Func::Cos => (neg(call(Func::Sin, u)), false),
                Func::Sqrt => (div(c(0.5), call(Func::Sqrt, u)), false),
                Func::Abs => (sub(mul(c(2.0), step(u)), c(1.0)), true),
                Func::Step => (c(0.0), true),
            };
            (mul(outer, du), kink || one_sided)
        }
        Expr::Max(a, b) => {
            let (da, _) = d(a);
            let (db, _) = d(b);
            let s = step(sub((**a).clone(), (**b).clone()));
            let out = add(mul(s.clone(), da), mul(sub(c(1.0), s), db));
            (out, true)
        }
    }
}

impl Expr {
    /// Symbolic derivative of the given order (`order = 0` returns a copy).
    pub fn differentiate(&self, order: usize) -> Derivative {
        let mut expr = self.clone();
        let mut kink = false;
        for _ in 0..order {
            let (next, k) = d(&expr);
            expr = next;
            kink |= k;
        }
        Derivative { expr, kink }
    }
}
