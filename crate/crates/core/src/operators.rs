//! Positive linear functionals built from point evaluations and subinterval
//! integrals with nonnegative coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::EvalError;
use crate::rules::{gauss_legendre, pairwise_sum, ExactnessReport, MomentBasis, QuadratureRule};
use crate::scalar::Real;

/// Order of the Gauss rule that resolves integral terms.
pub const RESOLUTION_ORDER: usize = 12;

/// Moment tolerance used to validate a claimed exactness degree.
pub const CLAIM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointTerm<T> {
    pub coefficient: T,
    pub abscissa: T,
}

/// `coefficient · ∫_lo^hi f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralTerm<T> {
    pub coefficient: T,
    pub lo: T,
    pub hi: T,
}

/// A conical combination of point evaluations and subinterval integrals.
///
/// Integral terms are evaluated with a fixed [`RESOLUTION_ORDER`]-point
/// Gauss rule, which is exact for polynomials up to degree 23; for other
/// integrands that part of the value is not certified.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveLinearOperator<T> {
    points: Vec<PointTerm<T>>,
    integrals: Vec<IntegralTerm<T>>,
    claimed_exactness: Option<usize>,
    support: (T, T),
    resolution: QuadratureRule<T>,
    label: String,
}

/// Serialized form: `{points: [[c, a]…], integrals: [[c, lo, hi]…], exactness}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorRecord<T> {
    pub points: Vec<[T; 2]>,
    #[serde(default)]
    pub integrals: Vec<[T; 3]>,
    #[serde(default)]
    pub exactness: Option<usize>,
}

impl<T: Real> PositiveLinearOperator<T> {
    /// Builds an operator on `[-1, 1]`. A claimed exactness degree is
    /// verified by a moment test and construction fails if it does not hold.
    pub fn new(
        points: Vec<PointTerm<T>>,
        integrals: Vec<IntegralTerm<T>>,
        claimed_exactness: Option<usize>,
    ) -> Result<Self> {
        Self::on_interval(points, integrals, claimed_exactness, -T::one(), T::one())
    }

    /// Point-mass operator on an arbitrary interval `[a, b]`, with no
    /// exactness claim.
    pub fn point_masses_on(points: Vec<PointTerm<T>>, a: T, b: T) -> Result<Self> {
        Self::on_interval(points, Vec::new(), None, a, b)
    }

    fn on_interval(
        points: Vec<PointTerm<T>>,
        integrals: Vec<IntegralTerm<T>>,
        claimed_exactness: Option<usize>,
        a: T,
        b: T,
    ) -> Result<Self> {
        if !(a < b) {
            return Err(Error::domain(format!(
                "operator support [{a}, {b}] is empty"
            )));
        }
        if claimed_exactness.is_some() && (a != -T::one() || b != T::one()) {
            return Err(Error::domain("exactness is only defined on [-1, 1]"));
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.coefficient >= T::zero()) || !p.coefficient.is_finite() {
                return Err(Error::domain(format!(
                    "point term {i} has coefficient {} (must be finite and nonnegative)",
                    p.coefficient
                )));
            }
            if !(p.abscissa >= a && p.abscissa <= b) {
                return Err(Error::domain(format!(
                    "point term {i} abscissa {} lies outside [{a}, {b}]",
                    p.abscissa
                )));
            }
        }
        for (i, t) in integrals.iter().enumerate() {
            if !(t.coefficient >= T::zero()) || !t.coefficient.is_finite() {
                return Err(Error::domain(format!(
                    "integral term {i} has coefficient {} (must be finite and nonnegative)",
                    t.coefficient
                )));
            }
            if !(a <= t.lo && t.lo < t.hi && t.hi <= b) {
                return Err(Error::domain(format!(
                    "integral term {i} range [{}, {}] is not a subinterval of [{a}, {b}]",
                    t.lo, t.hi
                )));
            }
        }
        let op = PositiveLinearOperator {
            points,
            integrals,
            claimed_exactness,
            support: (a, b),
            resolution: gauss_legendre(RESOLUTION_ORDER)?,
            label: String::from("operator"),
        };
        if let Some(k) = claimed_exactness {
            let report = op.verify_exactness(k, CLAIM_TOL);
            if !report.passed {
                return Err(Error::domain(format!(
                    "claimed exactness on polynomials of degree {k} does not hold: {}",
                    report.summary()
                )));
            }
        }
        Ok(op)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The rule's `(weight, node)` pairs as point terms.
    pub fn from_rule(rule: &QuadratureRule<T>) -> Self {
        let points = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&abscissa, &coefficient)| PointTerm {
                coefficient,
                abscissa,
            })
            .collect();
        PositiveLinearOperator {
            points,
            integrals: Vec::new(),
            claimed_exactness: Some(rule.exactness_degree),
            support: (-T::one(), T::one()),
            resolution: gauss_legendre(RESOLUTION_ORDER).expect("resolution order within cap"),
            label: rule.symbol(),
        }
    }

    /// `T(f) = 3/11 [f(-1) + f(1)] + 16/11 ∫_{-1/2}^{1/2} f`, a positive
    /// operator exact on cubics that is not a quadrature rule.
    pub fn hybrid_example() -> Self {
        let c = T::lit(3.0) / T::lit(11.0);
        let half = T::lit(0.5);
        Self::new(
            vec![
                PointTerm {
                    coefficient: c,
                    abscissa: -T::one(),
                },
                PointTerm {
                    coefficient: c,
                    abscissa: T::one(),
                },
            ],
            vec![IntegralTerm {
                coefficient: T::lit(16.0) / T::lit(11.0),
                lo: -half,
                hi: half,
            }],
            Some(3),
        )
        .expect("hybrid operator is exact on cubics")
        .with_label("3/11[f(-1)+f(1)] + 16/11 int_{-1/2}^{1/2} f")
    }

    /// `Σ λ_i T_i` for nonnegative `λ_i`. The claimed exactness of the mix is
    /// the minimum of the parts' claims when the `λ_i` sum to one.
    pub fn mix(parts: &[(T, &Self)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::domain("cannot mix an empty list of operators"));
        }
        let mut points = Vec::new();
        let mut integrals = Vec::new();
        for (i, (lambda, op)) in parts.iter().enumerate() {
            if !(*lambda >= T::zero()) {
                return Err(Error::domain(format!("mixing weight {i} is negative")));
            }
            if op.support != (-T::one(), T::one()) {
                return Err(Error::domain("only operators on [-1, 1] can be mixed"));
            }
            points.extend(op.points.iter().map(|p| PointTerm {
                coefficient: *lambda * p.coefficient,
                abscissa: p.abscissa,
            }));
            integrals.extend(op.integrals.iter().map(|t| IntegralTerm {
                coefficient: *lambda * t.coefficient,
                ..*t
            }));
        }
        let total: T = parts.iter().map(|(l, _)| *l).sum();
        let claim = if (total - T::one()).abs() <= T::lit(1e-12) {
            parts
                .iter()
                .map(|(_, op)| op.claimed_exactness)
                .try_fold(usize::MAX, |acc, c| c.map(|c| acc.min(c)))
        } else {
            None
        };
        let label = parts
            .iter()
            .map(|(l, op)| format!("{l}*{}", op.label))
            .collect::<Vec<_>>()
            .join(" + ");
        Ok(Self::new(points, integrals, claim)?.with_label(label))
    }

    pub fn points(&self) -> &[PointTerm<T>] {
        &self.points
    }

    pub fn integrals(&self) -> &[IntegralTerm<T>] {
        &self.integrals
    }

    pub fn claimed_exactness(&self) -> Option<usize> {
        self.claimed_exactness
    }

    pub fn support(&self) -> (T, T) {
        self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `Σ c_i f(a_i) + Σ c_j ∫_{lo_j}^{hi_j} f`.
    pub fn apply(&self, f: impl Fn(T) -> T) -> T {
        let mut terms: Vec<T> = self
            .points
            .iter()
            .map(|p| p.coefficient * f(p.abscissa))
            .collect();
        for t in &self.integrals {
            let v = self
                .resolution
                .apply_on_interval(&f, t.lo, t.hi)
                .expect("validated nonempty range");
            terms.push(t.coefficient * v);
        }
        pairwise_sum(&terms)
    }

    /// Fallible variant of [`apply`](Self::apply); failures name the term.
    pub fn try_apply(&self, f: impl Fn(T) -> Result<T, EvalError>) -> Result<T> {
        let mut terms = Vec::with_capacity(self.points.len() + self.integrals.len());
        for (i, p) in self.points.iter().enumerate() {
            let v = f(p.abscissa).map_err(|source| Error::Evaluation {
                location: format!("point term {i} (x = {:e})", p.abscissa),
                source,
            })?;
            terms.push(p.coefficient * v);
        }
        for (j, t) in self.integrals.iter().enumerate() {
            let half = (t.hi - t.lo) * T::lit(0.5);
            let mid = (t.hi + t.lo) * T::lit(0.5);
            let v = self
                .resolution
                .try_apply(|x| f(half * x + mid))
                .map_err(|e| match e {
                    Error::Evaluation { location, source } => Error::Evaluation {
                        location: format!(
                            "integral term {j} over [{:e}, {:e}], {location}",
                            t.lo, t.hi
                        ),
                        source,
                    },
                    other => other,
                })?;
            terms.push(t.coefficient * half * v);
        }
        Ok(pairwise_sum(&terms))
    }

    /// Moment test in the monomial basis for degrees `0..=k`.
    pub fn verify_exactness(&self, k: usize, tol: f64) -> ExactnessReport {
        self.verify_exactness_in(MomentBasis::Monomial, k, tol)
    }

    pub fn verify_exactness_in(&self, basis: MomentBasis, k: usize, tol: f64) -> ExactnessReport {
        ExactnessReport::build(basis, k, tol, |j| {
            self.apply(|x| basis.eval(j, x)).to_f64_lossy()
        })
    }

    pub fn to_record(&self) -> OperatorRecord<T> {
        OperatorRecord {
            points: self
                .points
                .iter()
                .map(|p| [p.coefficient, p.abscissa])
                .collect(),
            integrals: self
                .integrals
                .iter()
                .map(|t| [t.coefficient, t.lo, t.hi])
                .collect(),
            exactness: self.claimed_exactness,
        }
    }

    pub fn from_record(record: &OperatorRecord<T>) -> Result<Self> {
        let points = record
            .points
            .iter()
            .map(|&[coefficient, abscissa]| PointTerm {
                coefficient,
                abscissa,
            })
            .collect();
        let integrals = record
            .integrals
            .iter()
            .map(|&[coefficient, lo, hi]| IntegralTerm {
                coefficient,
                lo,
                hi,
            })
            .collect();
        Self::new(points, integrals, record.exactness)
    }
}
