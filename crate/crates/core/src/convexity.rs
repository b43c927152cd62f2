//! Divided differences, discrete n-convexity tests, and support polynomials
//! built by Hermite interpolation with doubled nodes.
//!
//! A function is *n-convex* when every divided difference over `n + 2`
//! distinct points is nonnegative (so 1-convex is ordinary convexity).
//!
//! For a (2n−1)-convex `f`, the Hermite interpolant with doubled nodes at the
//! Gauss points lies below `f`; the one with simple nodes at ±1 and doubled
//! interior Lobatto nodes lies above it. The Radau variants do the same for
//! 2n-convex `f`. The interpolation error is a higher divided difference of
//! `f` times a product that has constant sign on `[-1, 1]`, which is what
//! these constructions rely on.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rules::{gauss_legendre, lobatto, radau_left, radau_right};
use crate::scalar::Real;

/// Step of the central difference used when no derivative is supplied.
pub const FD_STEP: f64 = 1e-6;
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-9;
pub const DEFAULT_SUPPORT_SAMPLES: usize = 10_000;

/// `[x_1, …, x_k; f]` for pairwise distinct abscissas.
///
/// The points are sorted before the recurrence, so the result does not depend
/// on the order in which they are supplied.
pub fn divided_difference<T: Real>(xs: &[T], fs: &[T]) -> Result<T> {
    if xs.is_empty() || xs.len() != fs.len() {
        return Err(Error::domain(format!(
            "divided difference needs matching nonempty inputs (got {} abscissas, {} values)",
            xs.len(),
            fs.len()
        )));
    }
    let mut pairs: Vec<(T, T)> = xs.iter().copied().zip(fs.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("abscissas are not NaN"));
    if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::domain(
            "repeated abscissa in divided difference; use hermite_divided_difference with derivative data",
        ));
    }
    let x: Vec<T> = pairs.iter().map(|p| p.0).collect();
    let mut table: Vec<T> = pairs.iter().map(|p| p.1).collect();
    let k = table.len();
    for order in 1..k {
        for i in 0..k - order {
            table[i] = (table[i + 1] - table[i]) / (x[i + order] - x[i]);
        }
    }
    Ok(table[0])
}

/// Interpolation abscissa with value (and, for a double node, derivative)
/// data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DividedDiffNode<T> {
    pub abscissa: T,
    pub multiplicity: usize,
    /// `f(x)`, then `f'(x)` for a double node.
    pub values: Vec<T>,
}

impl<T: Real> DividedDiffNode<T> {
    pub fn simple(abscissa: T, value: T) -> Self {
        DividedDiffNode {
            abscissa,
            multiplicity: 1,
            values: vec![value],
        }
    }

    pub fn double(abscissa: T, value: T, derivative: T) -> Self {
        DividedDiffNode {
            abscissa,
            multiplicity: 2,
            values: vec![value, derivative],
        }
    }
}

/// Polynomial in Newton form
/// `c_0 + c_1 (x - z_0) + … + c_m (x - z_0)…(x - z_{m-1})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NewtonPolynomial<T> {
    pub centers: Vec<T>,
    pub coefficients: Vec<T>,
}

impl<T: Real> NewtonPolynomial<T> {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// Nested multiplication from the last center.
    pub fn eval(&self, x: T) -> T {
        let m = self.degree();
        let mut p = self.coefficients[m];
        for i in (0..m).rev() {
            p = p * (x - self.centers[i]) + self.coefficients[i];
        }
        p
    }

    /// `(p(x), p'(x))`.
    pub fn eval_with_derivative(&self, x: T) -> (T, T) {
        let m = self.degree();
        let mut p = self.coefficients[m];
        let mut dp = T::zero();
        for i in (0..m).rev() {
            dp = dp * (x - self.centers[i]) + p;
            p = p * (x - self.centers[i]) + self.coefficients[i];
        }
        (p, dp)
    }

    /// Monomial coefficients, constant term first.
    pub fn to_monomial(&self) -> Vec<T> {
        let m = self.degree();
        let mut poly = vec![self.coefficients[m]];
        for i in (0..m).rev() {
            // poly <- poly * (x - z_i) + c_i
            let z = self.centers[i];
            let mut next = vec![T::zero(); poly.len() + 1];
            for (j, &a) in poly.iter().enumerate() {
                next[j + 1] += a;
                next[j] -= a * z;
            }
            next[0] += self.coefficients[i];
            poly = next;
        }
        poly
    }

    /// `∫_{-1}^{1} p` from the monomial expansion.
    pub fn integrate(&self) -> T {
        self.to_monomial()
            .iter()
            .enumerate()
            .filter(|(j, _)| j % 2 == 0)
            .map(|(j, &c)| c * T::lit(2.0) / T::from_count(j + 1))
            .sum()
    }
}

/// Hermite interpolant through simple and double nodes, built from
/// generalized divided differences (`[x, x; f] = f'(x)`).
pub fn hermite_divided_difference<T: Real>(
    nodes: &[DividedDiffNode<T>],
) -> Result<NewtonPolynomial<T>> {
    if nodes.is_empty() {
        return Err(Error::domain("interpolation needs at least one node"));
    }
    let mut z = Vec::new();
    let mut value = Vec::new();
    let mut slope = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        if node.multiplicity == 0 || node.multiplicity > 2 {
            return Err(Error::domain(format!(
                "node {i} has multiplicity {}; only simple and double nodes are supported",
                node.multiplicity
            )));
        }
        if node.values.len() < node.multiplicity {
            return Err(Error::domain(format!(
                "node {i} at x = {} is doubled but no derivative value was supplied",
                node.abscissa
            )));
        }
        if nodes[..i].iter().any(|o| o.abscissa == node.abscissa) {
            return Err(Error::domain(format!(
                "abscissa {} appears in more than one node",
                node.abscissa
            )));
        }
        for _ in 0..node.multiplicity {
            z.push(node.abscissa);
            value.push(node.values[0]);
            slope.push(node.values.get(1).copied());
        }
    }
    let m = z.len();
    let mut table = value.clone();
    let mut coefficients = vec![table[0]];
    for order in 1..m {
        for i in 0..m - order {
            table[i] = if order == 1 && z[i + 1] == z[i] {
                slope[i].expect("doubled node carries a derivative")
            } else {
                (table[i + 1] - table[i]) / (z[i + order] - z[i])
            };
        }
        coefficients.push(table[0]);
    }
    Ok(NewtonPolynomial {
        centers: z,
        coefficients,
    })
}

/// Result of a discrete n-convexity test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub n: usize,
    pub windows: usize,
    /// Smallest divided difference found.
    pub min_value: f64,
    /// Index of the first grid point of the window attaining `min_value`.
    pub min_window: usize,
    /// Rounding-noise allowance of that window.
    pub noise_floor: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Checks `[x_i, …, x_{i+n+1}; f] ≥ -tol` for every window of `n + 2`
/// consecutive grid points.
///
/// This is a necessary condition only: windows that are not consecutive are
/// not examined. Each window is also allowed its own rounding noise, an
/// estimate of the floating-point error in evaluating the difference, so
/// that fine grids on functions with a vanishing `(n+1)`-th derivative do not
/// produce spurious failures.
pub fn is_n_convex_on_grid<T: Real>(
    f: impl Fn(T) -> T,
    n: usize,
    grid: &[T],
    tol: T,
) -> Result<ConvexityReport> {
    if n == 0 {
        return Err(Error::domain("convexity order must be at least 1"));
    }
    let width = n + 2;
    if grid.len() < width {
        return Err(Error::domain(format!(
            "grid of {} points is too short for {n}-convexity (needs {width})",
            grid.len()
        )));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("grid must be strictly increasing"));
    }
    if !(tol >= T::zero()) {
        return Err(Error::domain("tolerance must be nonnegative"));
    }
    let values: Vec<T> = grid.iter().map(|&x| f(x)).collect();
    let noise_factor = T::epsilon() * T::from_count(8 * width);
    let mut worst: Option<(T, usize, T)> = None;
    let mut passed = true;
    for start in 0..=grid.len() - width {
        let xs = &grid[start..start + width];
        let fs = &values[start..start + width];
        let dd = divided_difference(xs, fs)?;
        // Σ |f_j| / |ω'(x_j)| bounds the magnitude of the cancelling terms.
        let scale: T = xs
            .iter()
            .zip(fs)
            .map(|(&xj, &fj)| {
                let w: T = xs
                    .iter()
                    .filter(|&&xk| xk != xj)
                    .map(|&xk| (xj - xk).abs())
                    .fold(T::one(), |a, b| a * b);
                fj.abs() / w
            })
            .sum();
        let noise = noise_factor * scale;
        if !(dd >= -(tol + noise)) {
            passed = false;
        }
        if worst.is_none_or(|(v, _, _)| dd < v) {
            worst = Some((dd, start, noise));
        }
    }
    let (min_value, min_window, noise) = worst.expect("at least one window");
    Ok(ConvexityReport {
        n,
        windows: grid.len() - width + 1,
        min_value: min_value.to_f64_lossy(),
        min_window,
        noise_floor: noise.to_f64_lossy(),
        tol: tol.to_f64_lossy(),
        passed,
    })
}

/// Uniform grid of `points` values spanning `[a, b]` inclusive.
pub fn uniform_grid<T: Real>(a: T, b: T, points: usize) -> Vec<T> {
    match points {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let last = T::from_count(points - 1);
            (0..points)
                .map(|i| {
                    if i + 1 == points {
                        b
                    } else {
                        a + (b - a) * T::from_count(i) / last
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Below,
    Above,
}

/// Which support construction to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    /// Doubled nodes at the `n` Gauss points; degree `2n-1`; lies below a
    /// (2n−1)-convex `f`.
    GaussLower,
    /// Simple nodes at ±1, doubled at the interior nodes of `Lob_{n+1}`;
    /// degree `2n-1`; lies above.
    LobattoUpper,
    /// Simple node at -1, doubled at the free nodes of `Rad^l_{n+1}`; degree
    /// `2n`; lies below a 2n-convex `f`.
    RadauLeftLower,
    /// Doubled at the free nodes of `Rad^r_{n+1}`, simple at +1; degree `2n`;
    /// lies above.
    RadauRightUpper,
}

impl SupportKind {
    pub const ALL: [SupportKind; 4] = [
        SupportKind::GaussLower,
        SupportKind::LobattoUpper,
        SupportKind::RadauLeftLower,
        SupportKind::RadauRightUpper,
    ];

    pub fn side(self) -> Side {
        match self {
            SupportKind::GaussLower | SupportKind::RadauLeftLower => Side::Below,
            SupportKind::LobattoUpper | SupportKind::RadauRightUpper => Side::Above,
        }
    }

    /// Convexity order the construction requires of `f`.
    pub fn convexity_order(self, n: usize) -> usize {
        match self {
            SupportKind::GaussLower | SupportKind::LobattoUpper => 2 * n - 1,
            SupportKind::RadauLeftLower | SupportKind::RadauRightUpper => 2 * n,
        }
    }

    pub fn degree(self, n: usize) -> usize {
        self.convexity_order(n)
    }

    /// `(simple nodes, doubled nodes)` for order `n`.
    pub fn abscissas<T: Real>(self, n: usize) -> Result<(Vec<T>, Vec<T>)> {
        if n == 0 {
            return Err(Error::Range {
                what: "n",
                value: 0,
                range: "n >= 1",
            });
        }
        Ok(match self {
            SupportKind::GaussLower => (Vec::new(), gauss_legendre::<T>(n)?.nodes),
            SupportKind::LobattoUpper => {
                let nodes = lobatto::<T>(n + 1)?.nodes;
                (vec![-T::one(), T::one()], nodes[1..n].to_vec())
            }
            SupportKind::RadauLeftLower => {
                let nodes = radau_left::<T>(n + 1)?.nodes;
                (vec![-T::one()], nodes[1..].to_vec())
            }
            SupportKind::RadauRightUpper => {
                let nodes = radau_right::<T>(n + 1)?.nodes;
                (vec![T::one()], nodes[..n].to_vec())
            }
        })
    }
}

impl std::str::FromStr for SupportKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "gauss-lower" | "gauss" => Ok(SupportKind::GaussLower),
            "lobatto-upper" | "lobatto" => Ok(SupportKind::LobattoUpper),
            "radau-left-lower" | "radau-left" => Ok(SupportKind::RadauLeftLower),
            "radau-right-upper" | "radau-right" => Ok(SupportKind::RadauRightUpper),
            other => Err(Error::domain(format!("unknown support kind '{other}'"))),
        }
    }
}

fn support_nodes<T: Real>(
    f: &impl Fn(T) -> T,
    fprime: &impl Fn(T) -> T,
    kind: SupportKind,
    n: usize,
) -> Result<Vec<DividedDiffNode<T>>> {
    let (simple, doubled) = kind.abscissas::<T>(n)?;
    let mut nodes: Vec<DividedDiffNode<T>> = simple
        .iter()
        .map(|&x| DividedDiffNode::simple(x, f(x)))
        .chain(
            doubled
                .iter()
                .map(|&x| DividedDiffNode::double(x, f(x), fprime(x))),
        )
        .collect();
    nodes.sort_by(|a, b| a.abscissa.partial_cmp(&b.abscissa).expect("finite nodes"));
    Ok(nodes)
}

/// Support (`Below`) or majorant (`Above`) polynomial of `f` for the given
/// construction. `fprime` supplies `f'` at the doubled nodes.
pub fn support_polynomial<T: Real>(
    f: impl Fn(T) -> T,
    fprime: impl Fn(T) -> T,
    kind: SupportKind,
    n: usize,
) -> Result<NewtonPolynomial<T>> {
    hermite_divided_difference(&support_nodes(&f, &fprime, kind, n)?)
}

/// Central difference with step [`FD_STEP`]. Results built on it are not
/// certified.
pub fn central_difference<T: Real>(f: &impl Fn(T) -> T, x: T) -> T {
    let h = T::lit(FD_STEP);
    (f(x + h) - f(x - h)) / (h + h)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportVerification {
    pub side: Side,
    pub sample_count: usize,
    /// `min(f - p)` for `Below`, `min(p - f)` for `Above`, over the samples.
    pub worst_violation: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Samples `f - p` on a uniform grid of `samples` points over `[-1, 1]`.
pub fn verify_support<T: Real>(
    p: &NewtonPolynomial<T>,
    f: impl Fn(T) -> T,
    side: Side,
    samples: usize,
    tol: T,
) -> Result<SupportVerification> {
    if samples < 100 {
        return Err(Error::domain(format!(
            "support verification needs at least 100 samples (got {samples})"
        )));
    }
    let worst = uniform_grid(-T::one(), T::one(), samples)
        .into_iter()
        .map(|x| {
            let gap = f(x) - p.eval(x);
            match side {
                Side::Below => gap,
                Side::Above => -gap,
            }
        })
        .fold(
            T::infinity(),
            |a, b| if b < a || b.is_nan() { b } else { a },
        );
    Ok(SupportVerification {
        side,
        sample_count: samples,
        worst_violation: worst.to_f64_lossy(),
        tol: tol.to_f64_lossy(),
        passed: worst >= -tol,
    })
}

/// Full record for one support construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportCertificate<T> {
    pub kind: SupportKind,
    pub n: usize,
    pub polynomial: NewtonPolynomial<T>,
    pub sample_count: usize,
    pub worst_violation: f64,
    /// Largest mismatch in the interpolation conditions (values and, at
    /// doubled nodes, derivatives).
    pub node_residual: f64,
    pub tol: f64,
    pub passed: bool,
    /// False when derivatives came from finite differences.
    pub certified: bool,
}

/// Builds and checks a support polynomial. With `fprime = None` the doubled
/// nodes use [`central_difference`] and the certificate is marked
/// uncertified.
pub fn support_certificate<T: Real>(
    f: impl Fn(T) -> T,
    fprime: Option<&dyn Fn(T) -> T>,
    kind: SupportKind,
    n: usize,
    samples: usize,
    tol: T,
) -> Result<SupportCertificate<T>> {
    let certified = fprime.is_some();
    let fd = |x: T| central_difference(&f, x);
    let deriv = |x: T| match fprime {
        Some(g) => g(x),
        None => fd(x),
    };
    let nodes = support_nodes(&f, &deriv, kind, n)?;
    let polynomial = hermite_divided_difference(&nodes)?;
    let mut residual = T::zero();
    for node in &nodes {
        let (pv, dv) = polynomial.eval_with_derivative(node.abscissa);
        residual = residual.max((pv - node.values[0]).abs());
        if node.multiplicity == 2 {
            residual = residual.max((dv - node.values[1]).abs());
        }
    }
    let check = verify_support(&polynomial, &f, kind.side(), samples, tol)?;
    Ok(SupportCertificate {
        kind,
        n,
        polynomial,
        sample_count: samples,
        worst_violation: check.worst_violation,
        node_residual: residual.to_f64_lossy(),
        tol: check.tol,
        passed: check.passed,
        certified,
    })
}

/// `∫_{-1}^{1} p`.
pub fn integrate_polynomial<T: Real>(p: &NewtonPolynomial<T>) -> T {
    p.integrate()
}
