//! Error-bound constants and certified enclosures.
//!
//! For a positive operator `T` exact on `Π_k` (`k ≥ 2`),
//! `|∫f - T(f)| ≤ α_k ‖f^(k)‖` with
//!
//! ```text
//! α_{2n}   = 4^{n+1} (n!)^4 / ((2n+1) [(2n)!]^3)
//! α_{2n+1} = 4^{n+1} (n+1) (n!)^4 / [(2n+1)!]^3
//! ```
//!
//! All constants are exact rationals; they are rounded to `f64` only when an
//! enclosure is formed.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::operators::PositiveLinearOperator;
use crate::rules::{Family, QuadratureRule};

/// Points sampled by [`estimate_derivative_bound`].
pub const ESTIMATE_SAMPLES: usize = 1000;
/// Inflation applied to a sampled derivative bound.
pub const ESTIMATE_INFLATION: f64 = 1.1;

/// Exact rational in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalConstant(BigRational);

impl RationalConstant {
    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        RationalConstant(BigRational::new(numer, denom))
    }

    pub fn from_integer(v: i64) -> Self {
        RationalConstant(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        RationalConstant(self.0.abs())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

impl std::ops::Mul<i64> for &RationalConstant {
    type Output = RationalConstant;

    fn mul(self, rhs: i64) -> RationalConstant {
        RationalConstant(&self.0 * BigRational::from_integer(BigInt::from(rhs)))
    }
}

impl fmt::Display for RationalConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for RationalConstant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn ratio(numer: BigInt, denom: BigInt) -> RationalConstant {
    RationalConstant::new(numer, denom)
}

/// `α_k` for `k ≥ 2`.
pub fn alpha(k: usize) -> Result<RationalConstant> {
    if k < 2 {
        return Err(Error::Range {
            what: "k",
            value: k as i64,
            range: "k >= 2",
        });
    }
    let n = (k / 2) as u64;
    let four_pow = big(4).pow((n + 1) as u32);
    let nf4 = factorial(n).pow(4);
    Ok(if k.is_multiple_of(2) {
        ratio(four_pow * nf4, big(2 * n + 1) * factorial(2 * n).pow(3))
    } else {
        ratio(four_pow * big(n + 1) * nf4, factorial(2 * n + 1).pow(3))
    })
}

/// Signed constant `C` and derivative order `m` in the classical remainder
/// `∫f = Q_n(f) + C f^(m)(ξ)` of the `n`-point rule.
pub fn classical_error_constant(family: Family, n: usize) -> Result<(RationalConstant, usize)> {
    if n < family.min_order() {
        return Err(Error::Range {
            what: "n",
            value: n as i64,
            range: if family == Family::GaussLegendre {
                "n >= 1"
            } else {
                "n >= 2"
            },
        });
    }
    let m = n as u64;
    Ok(match family {
        Family::GaussLegendre => (
            ratio(
                big(2).pow((2 * m + 1) as u32) * factorial(m).pow(4),
                big(2 * m + 1) * factorial(2 * m).pow(3),
            ),
            2 * n,
        ),
        Family::Lobatto => (
            ratio(
                -(big(m)
                    * big(m - 1).pow(3)
                    * big(2).pow((2 * m - 1) as u32)
                    * factorial(m - 2).pow(4)),
                big(2 * m - 1) * factorial(2 * m - 2).pow(3),
            ),
            2 * n - 2,
        ),
        Family::RadauLeft | Family::RadauRight => {
            let magnitude = big(2).pow((2 * m - 1) as u32) * big(m) * factorial(m - 1).pow(4);
            let numer = if family == Family::RadauLeft {
                magnitude
            } else {
                -magnitude
            };
            (ratio(numer, factorial(2 * m - 1).pow(3)), 2 * n - 1)
        }
    })
}

/// Smallest `N` for which the `N`-point rule of `family` is exact on `Π_k`.
pub fn min_points(family: Family, k: usize) -> Result<usize> {
    if k < 2 {
        return Err(Error::Range {
            what: "k",
            value: k as i64,
            range: "k >= 2",
        });
    }
    Ok(match family {
        Family::GaussLegendre => k / 2 + 1,
        Family::Lobatto => k / 2 + 2,
        Family::RadauLeft | Family::RadauRight => k.div_ceil(2) + 1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBound {
    pub k: usize,
    pub alpha: RationalConstant,
    pub derivative_bound: f64,
    /// `α_k · derivative_bound`.
    pub bound: f64,
}

/// Guaranteed `|∫f - T(f)|` for any `f ∈ C^k` with `‖f^(k)‖ ≤
/// derivative_bound`. Fails with [`Error::Hypothesis`] unless `T` is exact on
/// `Π_k`.
pub fn error_bound(
    op: &PositiveLinearOperator<f64>,
    k: usize,
    derivative_bound: f64,
) -> Result<ErrorBound> {
    let alpha = alpha(k)?;
    check_derivative_bound(derivative_bound)?;
    let report = op.verify_exactness(k, 1e-10);
    if !report.passed {
        return Err(Error::Hypothesis(format!(
            "error bound with k = {k} requires exactness on polynomials of degree {k}; {} is {}",
            op.label(),
            report.summary()
        )));
    }
    Ok(ErrorBound {
        k,
        bound: alpha.to_f64() * derivative_bound,
        alpha,
        derivative_bound,
    })
}

fn check_derivative_bound(b: f64) -> Result<()> {
    if b.is_finite() && b >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "derivative bound must be finite and nonnegative, got {b}"
        )))
    }
}

/// An integral estimate together with its guaranteed enclosure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorCertificate {
    pub operator_id: String,
    pub k: usize,
    pub alpha: RationalConstant,
    pub derivative_bound: f64,
    pub bound: f64,
    pub estimate: f64,
    pub enclosure: [f64; 2],
    /// False when `derivative_bound` was estimated rather than supplied.
    pub certified: bool,
}

impl ErrorCertificate {
    pub fn contains(&self, v: f64) -> bool {
        self.enclosure[0] <= v && v <= self.enclosure[1]
    }
}

fn certificate(
    rule: &QuadratureRule<f64>,
    k: usize,
    derivative_bound: f64,
    estimate: f64,
    certified: bool,
) -> Result<ErrorCertificate> {
    let alpha = alpha(k)?;
    let bound = alpha.to_f64() * derivative_bound;
    Ok(ErrorCertificate {
        operator_id: rule.id(),
        k,
        alpha,
        derivative_bound,
        bound,
        estimate,
        enclosure: [estimate - bound, estimate + bound],
        certified,
    })
}

/// Integrates `f` with the smallest rule of `family` that is exact on `Π_k`
/// and encloses the true integral using the caller's bound on `‖f^(k)‖`.
pub fn certified_integrate(
    f: impl Fn(f64) -> f64,
    k: usize,
    derivative_bound: f64,
    family: Family,
) -> Result<ErrorCertificate> {
    check_derivative_bound(derivative_bound)?;
    let rule = QuadratureRule::<f64>::new(family, min_points(family, k)?)?;
    let estimate = rule.apply(f);
    certificate(&rule, k, derivative_bound, estimate, true)
}

/// Samples the symbolic `k`-th derivative on [`ESTIMATE_SAMPLES`] points and
/// inflates the maximum by [`ESTIMATE_INFLATION`]. Not a proof of a bound.
pub fn estimate_derivative_bound(f: &Expr, k: usize) -> Result<f64> {
    let d = f.differentiate(k).expr;
    let mut sup = 0.0f64;
    for i in 0..ESTIMATE_SAMPLES {
        let x = -1.0 + 2.0 * i as f64 / (ESTIMATE_SAMPLES - 1) as f64;
        let v = d.eval(x).map_err(|source| Error::Evaluation {
            location: format!("derivative of order {k}"),
            source,
        })?;
        sup = sup.max(v.abs());
    }
    Ok(sup * ESTIMATE_INFLATION)
}

/// Like [`certified_integrate`] but with an estimated derivative bound; the
/// certificate is marked uncertified.
pub fn estimated_integrate(f: &Expr, k: usize, family: Family) -> Result<ErrorCertificate> {
    let b = estimate_derivative_bound(f, k)?;
    let rule = QuadratureRule::<f64>::new(family, min_points(family, k)?)?;
    let estimate = rule.try_apply(|x| f.eval(x))?;
    certificate(&rule, k, b, estimate, false)
}

impl RationalConstant {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{gauss_legendre, lobatto};

    fn q(n: i64, d: i64) -> RationalConstant {
        RationalConstant::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn alpha_small_k() {
        assert_eq!(alpha(2).unwrap(), q(2, 3));
        assert_eq!(alpha(3).unwrap(), q(4, 27));
        assert_eq!(alpha(4).unwrap(), q(2, 135));
        assert_eq!(alpha(3).unwrap().to_string(), "4/27");
        assert!(alpha(1).is_err());
    }

    #[test]
    fn classical_constants() {
        assert_eq!(
            classical_error_constant(Family::GaussLegendre, 1).unwrap(),
            (q(1, 3), 2)
        );
        assert_eq!(
            classical_error_constant(Family::GaussLegendre, 2).unwrap(),
            (q(1, 135), 4)
        );
        assert_eq!(
            classical_error_constant(Family::RadauLeft, 2).unwrap(),
            (q(2, 27), 3)
        );
        assert_eq!(
            classical_error_constant(Family::RadauRight, 2).unwrap(),
            (q(-2, 27), 3)
        );
        // trapezoid and Simpson on [-1, 1]
        assert_eq!(
            classical_error_constant(Family::Lobatto, 2).unwrap(),
            (q(-2, 3), 2)
        );
        assert_eq!(
            classical_error_constant(Family::Lobatto, 3).unwrap(),
            (q(-1, 90), 4)
        );
        assert!(classical_error_constant(Family::Lobatto, 1).is_err());
        assert!(classical_error_constant(Family::GaussLegendre, 0).is_err());
    }

    #[test]
    fn min_points_table() {
        assert_eq!(min_points(Family::GaussLegendre, 4).unwrap(), 3);
        assert_eq!(min_points(Family::Lobatto, 4).unwrap(), 4);
        assert_eq!(min_points(Family::RadauLeft, 5).unwrap(), 4);
        assert_eq!(min_points(Family::RadauRight, 2).unwrap(), 2);
        assert!(min_points(Family::GaussLegendre, 1).is_err());
    }

    #[test]
    fn error_bounds_for_exp() {
        let e = std::f64::consts::E;
        let exact = e - 1.0 / e;
        let g2 = PositiveLinearOperator::from_rule(&gauss_legendre(2).unwrap());
        let b = error_bound(&g2, 3, e).unwrap();
        assert!((b.bound - 4.0 / 27.0 * e).abs() < 1e-15);
        assert!((exact - g2.apply(f64::exp)).abs() <= b.bound);
        let l3 = PositiveLinearOperator::from_rule(&lobatto(3).unwrap());
        assert!((exact - l3.apply(f64::exp)).abs() <= error_bound(&l3, 3, e).unwrap().bound);
        assert!(matches!(error_bound(&g2, 4, e), Err(Error::Hypothesis(_))));
        let g3 = PositiveLinearOperator::from_rule(&gauss_legendre(3).unwrap());
        let b = error_bound(&g3, 4, e).unwrap();
        assert!((exact - g3.apply(f64::exp)).abs() <= b.bound);
        assert!(error_bound(&g3, 4, -1.0).is_err());
    }

    #[test]
    fn certified_enclosures() {
        let e = std::f64::consts::E;
        let c = certified_integrate(f64::exp, 4, e, Family::GaussLegendre).unwrap();
        assert_eq!(c.operator_id, "gauss_legendre(3)");
        assert!(c.contains(e - 1.0 / e) && c.certified);
        let c = certified_integrate(|x| x.powi(4), 4, 24.0, Family::GaussLegendre).unwrap();
        assert!((c.estimate - 0.4).abs() < 1e-15);
        assert!((c.enclosure[1] - c.enclosure[0] - 2.0 * 2.0 / 135.0 * 24.0).abs() < 1e-15);
        let c = certified_integrate(f64::exp, 2, e, Family::GaussLegendre).unwrap();
        assert!(c.contains(e - 1.0 / e));
    }

    #[test]
    fn estimated_bound_is_flagged() {
        let f = crate::expr::parse("exp(x)").unwrap();
        let c = estimated_integrate(&f, 3, Family::RadauLeft).unwrap();
        assert!(!c.certified);
        assert!((c.derivative_bound - 1.1 * std::f64::consts::E).abs() < 1e-12);
        let e = std::f64::consts::E;
        assert!(c.contains(e - 1.0 / e));
    }

    #[test]
    fn certificate_json_shape() {
        let c = certified_integrate(f64::exp, 3, 3.0, Family::Lobatto).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["alpha"], "4/27");
        assert_eq!(v["operator_id"], "lobatto(3)");
        assert_eq!(v["enclosure"].as_array().unwrap().len(), 2);
        assert_eq!(v["certified"], true);
    }
}
