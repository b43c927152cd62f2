//! Gauss–Legendre, Lobatto and left/right Radau rules on `[-1, 1]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::EvalError;
use crate::operators::{PointTerm, PositiveLinearOperator};
use crate::orthopoly::{legendre_eval, legendre_roots, lobatto_interior_roots, radau_roots};
use crate::scalar::Real;

/// Largest supported number of nodes.
pub const MAX_ORDER: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    GaussLegendre,
    Lobatto,
    RadauLeft,
    RadauRight,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::GaussLegendre,
        Family::Lobatto,
        Family::RadauLeft,
        Family::RadauRight,
    ];

    /// Smallest valid number of nodes.
    pub fn min_order(self) -> usize {
        match self {
            Family::GaussLegendre => 1,
            _ => 2,
        }
    }

    /// Highest polynomial degree integrated exactly by the `n`-point rule.
    pub fn exactness_degree(self, n: usize) -> usize {
        match self {
            Family::GaussLegendre => 2 * n - 1,
            Family::Lobatto => 2 * n - 3,
            Family::RadauLeft | Family::RadauRight => 2 * n - 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::GaussLegendre => "gauss_legendre",
            Family::Lobatto => "lobatto",
            Family::RadauLeft => "radau_left",
            Family::RadauRight => "radau_right",
        }
    }

    /// Short operator symbol used in reports, e.g. `G_3`, `Rad^l_4`.
    pub fn symbol(self, n: usize) -> String {
        match self {
            Family::GaussLegendre => format!("G_{n}"),
            Family::Lobatto => format!("Lob_{n}"),
            Family::RadauLeft => format!("Rad^l_{n}"),
            Family::RadauRight => format!("Rad^r_{n}"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "gauss" | "gauss_legendre" | "g" => Ok(Family::GaussLegendre),
            "lobatto" | "lob" => Ok(Family::Lobatto),
            "radau_left" | "radau_l" | "radau" => Ok(Family::RadauLeft),
            "radau_right" | "radau_r" => Ok(Family::RadauRight),
            other => Err(Error::domain(format!("unknown rule family '{other}'"))),
        }
    }
}

/// A positive-weight quadrature rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule<T> {
    pub family: Family,
    #[serde(rename = "n")]
    pub order: usize,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub exactness_degree: usize,
}

fn check_order(family: Family, n: usize) -> Result<()> {
    if n < family.min_order() || n > MAX_ORDER {
        return Err(Error::Range {
            what: "n",
            value: n as i64,
            range: if family == Family::GaussLegendre {
                "1 <= n <= 30"
            } else {
                "2 <= n <= 30"
            },
        });
    }
    Ok(())
}

/// `n`-point Gauss–Legendre rule, weights `2 / ((1-x²) P_n'(x)²)`.
pub fn gauss_legendre<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    gauss_legendre_in::<f64>(n).map(QuadratureRule::cast)
}

fn gauss_legendre_in<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    check_order(Family::GaussLegendre, n)?;
    let nodes = legendre_roots::<T>(n)?;
    let weights = nodes
        .iter()
        .map(|&x| {
            let dp = legendre_eval(n, x).derivative;
            T::lit(2.0) / ((T::one() - x) * (T::one() + x) * dp * dp)
        })
        .collect();
    Ok(QuadratureRule {
        family: Family::GaussLegendre,
        order: n,
        nodes,
        weights,
        exactness_degree: Family::GaussLegendre.exactness_degree(n),
    })
}

/// `n`-point Lobatto rule with both endpoints as nodes.
pub fn lobatto<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    lobatto_in::<f64>(n).map(QuadratureRule::cast)
}

fn lobatto_in<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    check_order(Family::Lobatto, n)?;
    let scale = T::lit(2.0) / T::from_count(n * (n - 1));
    let mut nodes = vec![-T::one()];
    let mut weights = vec![scale];
    // Lob_2 is the trapezoid rule and has no interior nodes.
    if n > 2 {
        for x in lobatto_interior_roots::<T>(n)? {
            let p = legendre_eval(n - 1, x).value;
            nodes.push(x);
            weights.push(scale / (p * p));
        }
    }
    nodes.push(T::one());
    weights.push(scale);
    Ok(QuadratureRule {
        family: Family::Lobatto,
        order: n,
        nodes,
        weights,
        exactness_degree: Family::Lobatto.exactness_degree(n),
    })
}

/// `n`-point Radau rule with the fixed node at `-1`.
pub fn radau_left<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    radau_left_in::<f64>(n).map(QuadratureRule::cast)
}

fn radau_left_in<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    check_order(Family::RadauLeft, n)?;
    let mut nodes = vec![-T::one()];
    let nf = T::from_count(n);
    let mut weights = vec![T::lit(2.0) / (nf * nf)];
    for x in radau_roots::<T>(n)? {
        let dp = legendre_eval(n - 1, x).derivative;
        nodes.push(x);
        weights.push(T::one() / ((T::one() - x) * dp * dp));
    }
    Ok(QuadratureRule {
        family: Family::RadauLeft,
        order: n,
        nodes,
        weights,
        exactness_degree: Family::RadauLeft.exactness_degree(n),
    })
}

/// Mirror image of [`radau_left`]: `Rad^r_n(f) = Rad^l_n(f(-·))`.
pub fn radau_right<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    check_order(Family::RadauRight, n)?;
    let left = radau_left::<T>(n)?;
    Ok(QuadratureRule {
        family: Family::RadauRight,
        order: n,
        nodes: left.nodes.iter().rev().map(|&x| -x).collect(),
        weights: left.weights.into_iter().rev().collect(),
        exactness_degree: Family::RadauRight.exactness_degree(n),
    })
}

/// Pairwise summation whose tree is symmetric under reversal of the input,
/// so a sum and its mirrored sum round identically.
pub(crate) fn pairwise_sum<T: Real>(terms: &[T]) -> T {
    match terms.len() {
        0 => T::zero(),
        1 => terms[0],
        2 => terms[0] + terms[1],
        len => {
            let half = len / 2;
            if len % 2 == 0 {
                pairwise_sum(&terms[..half]) + pairwise_sum(&terms[half..])
            } else {
                (pairwise_sum(&terms[..half]) + pairwise_sum(&terms[half + 1..])) + terms[half]
            }
        }
    }
}

impl<T: Real> QuadratureRule<T> {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        match family {
            Family::GaussLegendre => gauss_legendre(n),
            Family::Lobatto => lobatto(n),
            Family::RadauLeft => radau_left(n),
            Family::RadauRight => radau_right(n),
        }
    }

    /// Rounds nodes and weights to another scalar type.
    pub fn cast<U: Real>(self) -> QuadratureRule<U> {
        QuadratureRule {
            family: self.family,
            order: self.order,
            nodes: self
                .nodes
                .iter()
                .map(|x| U::lit(x.to_f64_lossy()))
                .collect(),
            weights: self
                .weights
                .iter()
                .map(|w| U::lit(w.to_f64_lossy()))
                .collect(),
            exactness_degree: self.exactness_degree,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Identifier such as `gauss_legendre(3)`.
    pub fn id(&self) -> String {
        format!("{}({})", self.family, self.order)
    }

    pub fn symbol(&self) -> String {
        self.family.symbol(self.order)
    }

    /// `Σ w_i f(x_i)`.
    pub fn apply(&self, f: impl Fn(T) -> T) -> T {
        let terms: Vec<T> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect();
        pairwise_sum(&terms)
    }

    /// Like [`apply`](Self::apply) for a fallible integrand; a failure is
    /// reported with the index of the offending node.
    pub fn try_apply(&self, f: impl Fn(T) -> Result<T, EvalError>) -> Result<T> {
        let mut terms = Vec::with_capacity(self.len());
        for (i, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = f(x).map_err(|source| Error::Evaluation {
                location: format!("node {i} (x = {x:e}) of {}", self.id()),
                source,
            })?;
            terms.push(w * v);
        }
        Ok(pairwise_sum(&terms))
    }

    /// Applies the rule to `f` on `[a, b]` through the affine change of
    /// variable onto `[-1, 1]`.
    pub fn apply_on_interval(&self, f: impl Fn(T) -> T, a: T, b: T) -> Result<T> {
        if !(a < b) {
            return Err(Error::domain(format!(
                "interval [{a}, {b}] is empty or reversed"
            )));
        }
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        Ok(half * self.apply(|x| f(half * x + mid)))
    }

    /// Moment test in the monomial basis: `|Q(x^j) - ∫x^j| ≤ tol` for
    /// `j = 0..=degree`.
    pub fn exactness_check(&self, degree: usize, tol: f64) -> ExactnessReport {
        self.exactness_check_in(MomentBasis::Monomial, degree, tol)
    }

    pub fn exactness_check_in(
        &self,
        basis: MomentBasis,
        degree: usize,
        tol: f64,
    ) -> ExactnessReport {
        ExactnessReport::build(basis, degree, tol, |j| {
            self.apply(|x| basis.eval(j, x)).to_f64_lossy()
        })
    }

    /// Composite operator applying the rule on each `[t_i, t_{i+1}]`.
    pub fn composite(&self, breakpoints: &[T]) -> Result<PositiveLinearOperator<T>> {
        if breakpoints.len() < 2 {
            return Err(Error::domain(
                "composite rule needs at least two breakpoints",
            ));
        }
        if breakpoints[0] != -T::one() || breakpoints[breakpoints.len() - 1] != T::one() {
            return Err(Error::domain(
                "composite breakpoints must start at -1 and end at 1",
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain(
                "composite breakpoints must be strictly increasing",
            ));
        }
        let mut points = Vec::with_capacity(self.len() * (breakpoints.len() - 1));
        for w in breakpoints.windows(2) {
            let half = (w[1] - w[0]) * T::lit(0.5);
            let mid = (w[1] + w[0]) * T::lit(0.5);
            for (&x, &wt) in self.nodes.iter().zip(&self.weights) {
                points.push(PointTerm {
                    coefficient: half * wt,
                    abscissa: (half * x + mid).max(-T::one()).min(T::one()),
                });
            }
        }
        PositiveLinearOperator::new(points, Vec::new(), Some(self.exactness_degree)).map(|op| {
            op.with_label(format!(
                "composite {} over {} panels",
                self.id(),
                breakpoints.len() - 1
            ))
        })
    }
}

/// Composite Gauss–Legendre integral of `f` over `[-1, 1]` with `panels`
/// equal panels. Used as a reference value; its accuracy is not certified.
pub fn reference_integral<T: Real>(f: impl Fn(T) -> T, order: usize, panels: usize) -> Result<T> {
    if panels == 0 {
        return Err(Error::domain("reference integral needs at least one panel"));
    }
    let rule = gauss_legendre::<T>(order.min(MAX_ORDER))?;
    let width = T::lit(2.0) / T::from_count(panels);
    let parts = (0..panels)
        .map(|i| {
            let a = -T::one() + width * T::from_count(i);
            let b = if i + 1 == panels { T::one() } else { a + width };
            rule.apply_on_interval(&f, a, b)
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(pairwise_sum(&parts))
}

/// Basis in which moment (exactness) tests are carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentBasis {
    /// `x^j`, with `∫x^j = 2/(j+1)` for even `j` and `0` for odd `j`.
    Monomial,
    /// Legendre polynomials `P_j`, with `∫P_j = 2δ_{j0}`. Better conditioned
    /// at high degree, where monomial defects become tiny.
    Legendre,
}

impl MomentBasis {
    pub fn eval<T: Real>(self, j: usize, x: T) -> T {
        match self {
            MomentBasis::Monomial => x.powi(j as i32),
            MomentBasis::Legendre => legendre_eval(j, x).value,
        }
    }

    pub fn moment(self, j: usize) -> f64 {
        match self {
            MomentBasis::Monomial if j.is_multiple_of(2) => 2.0 / (j + 1) as f64,
            MomentBasis::Monomial => 0.0,
            MomentBasis::Legendre if j == 0 => 2.0,
            MomentBasis::Legendre => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentDefect {
    pub degree: usize,
    pub value: f64,
    pub expected: f64,
    pub defect: f64,
}

/// Outcome of a moment test over degrees `0..=degree`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactnessReport {
    pub basis: MomentBasis,
    pub degree: usize,
    pub tol: f64,
    pub passed: bool,
    /// Lowest degree whose defect exceeds `tol`.
    pub first_failure: Option<MomentDefect>,
    /// Largest absolute defect over all tested degrees.
    pub worst: MomentDefect,
    pub moments: Vec<MomentDefect>,
}

impl ExactnessReport {
    pub(crate) fn build(
        basis: MomentBasis,
        degree: usize,
        tol: f64,
        apply: impl Fn(usize) -> f64,
    ) -> Self {
        let moments: Vec<MomentDefect> = (0..=degree)
            .map(|j| {
                let value = apply(j);
                let expected = basis.moment(j);
                MomentDefect {
                    degree: j,
                    value,
                    expected,
                    defect: value - expected,
                }
            })
            .collect();
        let first_failure = moments.iter().find(|m| !(m.defect.abs() <= tol)).copied();
        let worst = *moments
            .iter()
            .max_by(|a, b| a.defect.abs().total_cmp(&b.defect.abs()))
            .expect("at least the constant moment");
        ExactnessReport {
            basis,
            degree,
            tol,
            passed: first_failure.is_none(),
            first_failure,
            worst,
            moments,
        }
    }

    pub fn summary(&self) -> String {
        match &self.first_failure {
            None => format!(
                "exact through degree {} ({:?} moments, tol {:e})",
                self.degree, self.basis, self.tol
            ),
            Some(m) => format!(
                "not exact at degree {}: value {:.17e} vs moment {:.17e} (defect {:e}, tol {:e})",
                m.degree, m.value, m.expected, m.defect, self.tol
            ),
        }
    }
}
