//! Sandwich inequalities between canonical rules and a positive operator.
//!
//! * midpoint/trapezoid: `f((a+b)/2) ≤ Σ λ_i f(ξ_i) ≤ (f(a)+f(b))/2` for
//!   convex `f`, weights summing to one and barycenter `(a+b)/2`;
//! * odd order: `G_n(f) ≤ T(f) ≤ Lob_{n+1}(f)` for (2n−1)-convex `f` and
//!   positive `T` exact on `Π_{2n-1}`;
//! * even order: `Rad^l_{n+1}(f) ≤ T(f) ≤ Rad^r_{n+1}(f)` for 2n-convex `f`
//!   and positive `T` exact on `Π_{2n}`.
//!
//! A failed exactness hypothesis is reported as [`Error::Hypothesis`], never
//! as a report with `pass = false`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::PositiveLinearOperator;
use crate::rules::{
    gauss_legendre, lobatto, radau_left, radau_right, reference_integral, QuadratureRule,
};
use crate::scalar::Real;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Label of the middle term when it is a composite-Gauss reference integral.
pub const REFERENCE_LABEL: &str = "reference (non-certified)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            other => Err(Error::domain(format!(
                "parity must be 'odd' or 'even', got '{other}'"
            ))),
        }
    }
}

/// `lower ≤ middle ≤ upper` with signed margins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport<T> {
    pub lower_name: String,
    pub middle_name: String,
    pub upper_name: String,
    pub lower: T,
    pub middle: T,
    pub upper: T,
    /// `(middle - lower, upper - middle)`.
    pub margins: (T, T),
    pub pass: bool,
    pub tol: T,
}

impl<T: Real> SandwichReport<T> {
    pub fn new(
        (lower_name, lower): (String, T),
        (middle_name, middle): (String, T),
        (upper_name, upper): (String, T),
        tol: T,
    ) -> Self {
        let margins = (middle - lower, upper - middle);
        SandwichReport {
            lower_name,
            middle_name,
            upper_name,
            lower,
            middle,
            upper,
            margins,
            pass: margins.0 >= -tol && margins.1 >= -tol,
            tol,
        }
    }

    /// The smaller of the two margins.
    pub fn slack(&self) -> T {
        self.margins.0.min(self.margins.1)
    }

    /// Three-row table with 17 significant digits.
    pub fn to_table(&self) -> String {
        let width = [&self.lower_name, &self.middle_name, &self.upper_name]
            .iter()
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        let rows = [
            (&self.lower_name, self.lower, None),
            (&self.middle_name, self.middle, Some(self.margins.0)),
            (&self.upper_name, self.upper, Some(self.margins.1)),
        ];
        for (name, value, margin) in rows {
            let pad = width - name.chars().count();
            let _ = write!(out, "{name}{:pad$}  {:>24.16e}", "", value);
            if let Some(m) = margin {
                let _ = write!(out, "  margin {:>+24.16e}", m);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} (tol {:e})",
            if self.pass { "pass" } else { "FAIL" },
            self.tol
        );
        out
    }
}

/// Default hypothesis tolerance for moment checks at this precision.
fn hypothesis_tol<T: Real>(degree: usize) -> f64 {
    (100.0 * T::epsilon().to_f64_lossy() * (degree + 1) as f64).max(1e-10)
}

fn require_exactness<T: Real>(
    op: &PositiveLinearOperator<T>,
    degree: usize,
    context: &str,
) -> Result<()> {
    let report = op.verify_exactness(degree, hypothesis_tol::<T>(degree));
    if report.passed {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!(
            "{context} requires an operator exact on polynomials of degree {degree}; {} is {}",
            op.label(),
            report.summary()
        )))
    }
}

fn named<T: Real>(rule: &QuadratureRule<T>, f: &impl Fn(T) -> T) -> (String, T) {
    (rule.symbol(), rule.apply(f))
}

/// Midpoint/trapezoid sandwich for a point-mass operator on `[a, b]`.
pub fn check_midpoint_trapezoid<T: Real>(
    op: &PositiveLinearOperator<T>,
    f: impl Fn(T) -> T,
    a: T,
    b: T,
    tol: T,
) -> Result<SandwichReport<T>> {
    if !(a < b) {
        return Err(Error::domain(format!(
            "interval [{a}, {b}] is empty or reversed"
        )));
    }
    if !op.integrals().is_empty() {
        return Err(Error::domain(
            "midpoint/trapezoid check takes point terms only",
        ));
    }
    let eps = T::lit(1e-12);
    let total: T = op.points().iter().map(|p| p.coefficient).sum();
    if (total - T::one()).abs() > eps {
        return Err(Error::domain(format!("weights sum to {total}, not 1")));
    }
    let mid = (a + b) * T::lit(0.5);
    let barycenter: T = op.points().iter().map(|p| p.coefficient * p.abscissa).sum();
    let scale = T::one().max(a.abs()).max(b.abs());
    if (barycenter - mid).abs() > eps * scale {
        return Err(Error::domain(format!(
            "barycenter {barycenter} differs from the midpoint {mid}"
        )));
    }
    if op.points().iter().any(|p| p.abscissa < a || p.abscissa > b) {
        return Err(Error::domain("a point lies outside [a, b]"));
    }
    let middle = op.apply(&f);
    Ok(SandwichReport::new(
        ("f((a+b)/2)".into(), f(mid)),
        (String::from("sum lambda_i f(xi_i)"), middle),
        ("(f(a)+f(b))/2".into(), (f(a) + f(b)) * T::lit(0.5)),
        tol,
    ))
}

/// `G_n(f)`, `T(f)`, `Lob_{n+1}(f)` without checking the hypothesis.
pub fn odd_sandwich_raw<T: Real>(
    op: &PositiveLinearOperator<T>,
    f: impl Fn(T) -> T,
    n: usize,
    tol: T,
) -> Result<SandwichReport<T>> {
    let g = gauss_legendre::<T>(n)?;
    let l = lobatto::<T>(n + 1)?;
    Ok(SandwichReport::new(
        named(&g, &f),
        (op.label().to_string(), op.apply(&f)),
        named(&l, &f),
        tol,
    ))
}

/// `G_n(f) ≤ T(f) ≤ Lob_{n+1}(f)`; `T` must be exact on `Π_{2n-1}`.
pub fn check_odd_sandwich<T: Real>(
    op: &PositiveLinearOperator<T>,
    f: impl Fn(T) -> T,
    n: usize,
    tol: T,
) -> Result<SandwichReport<T>> {
    if n == 0 {
        return Err(Error::Range {
            what: "n",
            value: 0,
            range: "n >= 1",
        });
    }
    require_exactness(op, 2 * n - 1, &format!("G_{n} <= T <= Lob_{}", n + 1))?;
    odd_sandwich_raw(op, f, n, tol)
}

/// `Rad^l_{n+1}(f)`, `T(f)`, `Rad^r_{n+1}(f)` without checking the hypothesis.
pub fn even_sandwich_raw<T: Real>(
    op: &PositiveLinearOperator<T>,
    f: impl Fn(T) -> T,
    n: usize,
    tol: T,
) -> Result<SandwichReport<T>> {
    let l = radau_left::<T>(n + 1)?;
    let r = radau_right::<T>(n + 1)?;
    Ok(SandwichReport::new(
        named(&l, &f),
        (op.label().to_string(), op.apply(&f)),
        named(&r, &f),
        tol,
    ))
}

/// `Rad^l_{n+1}(f) ≤ T(f) ≤ Rad^r_{n+1}(f)`; `T` must be exact on `Π_{2n}`.
pub fn check_even_sandwich<T: Real>(
    op: &PositiveLinearOperator<T>,
    f: impl Fn(T) -> T,
    n: usize,
    tol: T,
) -> Result<SandwichReport<T>> {
    if n == 0 {
        return Err(Error::Range {
            what: "n",
            value: 0,
            range: "n >= 1",
        });
    }
    require_exactness(
        op,
        2 * n,
        &format!("Rad^l_{} <= T <= Rad^r_{}", n + 1, n + 1),
    )?;
    even_sandwich_raw(op, f, n, tol)
}

/// Reference value of `∫_{-1}^{1} f` used as the middle term of
/// [`hadamard_chain`]: order `n + 10` Gauss on 8 panels.
pub fn chain_reference<T: Real>(f: impl Fn(T) -> T, n: usize) -> Result<T> {
    reference_integral(f, n + 10, 8)
}

/// The sandwich with `T = I`, using a composite-Gauss reference integral.
pub fn hadamard_chain<T: Real>(
    f: impl Fn(T) -> T,
    n: usize,
    parity: Parity,
    tol: T,
) -> Result<SandwichReport<T>> {
    if n == 0 {
        return Err(Error::Range {
            what: "n",
            value: 0,
            range: "n >= 1",
        });
    }
    let middle = (REFERENCE_LABEL.to_string(), chain_reference(&f, n)?);
    let (lower, upper) = match parity {
        Parity::Odd => (gauss_legendre::<T>(n)?, lobatto::<T>(n + 1)?),
        Parity::Even => (radau_left::<T>(n + 1)?, radau_right::<T>(n + 1)?),
    };
    Ok(SandwichReport::new(
        named(&lower, &f),
        middle,
        named(&upper, &f),
        tol,
    ))
}
