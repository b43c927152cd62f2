//! Legendre polynomials and the root sets behind the Gauss, Lobatto and
//! Radau families.
//!
//! All root finders share one strategy: a deterministic sign-change scan
//! brackets every root, then a safeguarded Newton iteration (seeded with the
//! usual cosine guesses) refines each one, falling back to bisection whenever
//! a Newton step would leave its bracket.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_ITERATIONS: usize = 100;
const RADAU_GUARD: f64 = 1e-8;

/// `P_n(x)` together with `P_n'(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegendreEval<T> {
    pub n: usize,
    pub value: T,
    pub derivative: T,
}

/// Runs the three-term recurrence and returns `(P_{n-1}(x), P_n(x))`.
/// For `n = 0` the first component is zero.
fn legendre_pair<T: Real>(n: usize, x: T) -> (T, T) {
    if n == 0 {
        return (T::zero(), T::one());
    }
    let (mut prev, mut cur) = (T::one(), x);
    for k in 1..n {
        let kf = T::from_count(k);
        let next = ((kf + kf + T::one()) * x * cur - kf * prev) / (kf + T::one());
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// Value and derivative from the differentiated recurrence
/// `(k+1)P'_{k+1} = (2k+1)(P_k + x P'_k) - k P'_{k-1}`, valid everywhere
/// including `x = ±1`.
fn legendre_by_recurrence<T: Real>(n: usize, x: T) -> (T, T) {
    if n == 0 {
        return (T::one(), T::zero());
    }
    let (mut p_prev, mut p) = (T::one(), x);
    let (mut d_prev, mut d) = (T::zero(), T::one());
    for k in 1..n {
        let kf = T::from_count(k);
        let two_k1 = kf + kf + T::one();
        let p_next = (two_k1 * x * p - kf * p_prev) / (kf + T::one());
        let d_next = (two_k1 * (p + x * d) - kf * d_prev) / (kf + T::one());
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

/// Evaluates `P_n(x)` and `P_n'(x)`.
///
/// The derivative uses `(1 - x²) P_n' = n (P_{n-1} - x P_n)` in the interior
/// and the differentiated recurrence close to the endpoints, where that
/// identity degenerates.
pub fn legendre_eval<T: Real>(n: usize, x: T) -> LegendreEval<T> {
    let one_minus_sq = (T::one() - x) * (T::one() + x);
    if n == 0 {
        return LegendreEval {
            n,
            value: T::one(),
            derivative: T::zero(),
        };
    }
    if one_minus_sq.abs() < T::lit(1e-2) {
        let (value, derivative) = legendre_by_recurrence(n, x);
        return LegendreEval {
            n,
            value,
            derivative,
        };
    }
    let (prev, value) = legendre_pair(n, x);
    let derivative = T::from_count(n) * (prev - x * value) / one_minus_sq;
    LegendreEval {
        n,
        value,
        derivative,
    }
}

/// `P_n''(x)` from the Legendre differential equation. Interior points only.
fn legendre_second_derivative<T: Real>(n: usize, x: T, value: T, derivative: T) -> T {
    let nn = T::from_count(n * (n + 1));
    (T::lit(2.0) * x * derivative - nn * value) / ((T::one() - x) * (T::one() + x))
}

/// `P_k^{(j)}(-1) = (-1)^{k+j} (k+j)! / (2^j j! (k-j)!)` for `j ∈ {1, 2}`.
fn legendre_endpoint_derivative<T: Real>(k: usize, j: usize) -> T {
    if j > k {
        return T::zero();
    }
    let mut num = 1.0f64;
    for i in (k - j + 1)..=(k + j) {
        num *= i as f64;
    }
    let den = match j {
        1 => 2.0,
        2 => 8.0,
        _ => unreachable!("only first and second endpoint derivatives are needed"),
    };
    let sign = if (k + j).is_multiple_of(2) { 1.0 } else { -1.0 };
    T::lit(sign * num / den)
}

/// `Q_m(x) = (P_m(x) + P_{m+1}(x)) / (x + 1)` and its derivative.
///
/// Within `1e-8` of `-1` the removable singularity is replaced by the
/// first-order expansion `S'(-1) + S''(-1)(x+1)/2` of the numerator `S`.
pub fn radau_polynomial<T: Real>(m: usize, x: T) -> (T, T) {
    let shift = x + T::one();
    if shift.abs() < T::lit(RADAU_GUARD) {
        let s1 = legendre_endpoint_derivative::<T>(m, 1) + legendre_endpoint_derivative(m + 1, 1);
        let s2 = legendre_endpoint_derivative::<T>(m, 2) + legendre_endpoint_derivative(m + 1, 2);
        let half = T::lit(0.5);
        return (s1 + s2 * half * shift, s2 * half);
    }
    let lo = legendre_eval(m, x);
    let hi = legendre_eval(m + 1, x);
    let q = (lo.value + hi.value) / shift;
    let dq = (lo.derivative + hi.derivative - q) / shift;
    (q, dq)
}

/// Roots of `P_n`, ascending. Symmetric about zero.
pub fn legendre_roots<T: Real>(n: usize) -> Result<Vec<T>> {
    if n == 0 {
        return Err(Error::Range {
            what: "n",
            value: 0,
            range: "n >= 1",
        });
    }
    let nf = n as f64;
    let seeds: Vec<T> = (1..=n)
        .rev()
        .map(|i| {
            let theta = std::f64::consts::PI * (4.0 * i as f64 - 1.0) / (4.0 * nf + 2.0);
            T::lit(-theta.cos())
        })
        .collect();
    let mut roots = bracketed_roots(n, n, &seeds, |x| {
        let e = legendre_eval(n, x);
        (e.value, e.derivative)
    })?;
    symmetrize(&mut roots);
    Ok(roots)
}

/// Interior Lobatto nodes for the `n`-point rule: the `n - 2` roots of
/// `P'_{n-1}`, ascending.
pub fn lobatto_interior_roots<T: Real>(n: usize) -> Result<Vec<T>> {
    if n < 3 {
        return Err(Error::Range {
            what: "n",
            value: n as i64,
            range: "n >= 3",
        });
    }
    let m = n - 1;
    let seeds: Vec<T> = (1..=n - 2)
        .map(|i| T::lit(-(std::f64::consts::PI * i as f64 / m as f64).cos()))
        .collect();
    let mut roots = bracketed_roots(n, n - 2, &seeds, |x| {
        let e = legendre_eval(m, x);
        (
            e.derivative,
            legendre_second_derivative(m, x, e.value, e.derivative),
        )
    })?;
    symmetrize(&mut roots);
    Ok(roots)
}

/// Free Radau nodes for the `n`-point left rule: the `n - 1` roots of
/// `Q_{n-1}`, ascending.
pub fn radau_roots<T: Real>(n: usize) -> Result<Vec<T>> {
    if n < 2 {
        return Err(Error::Range {
            what: "n",
            value: n as i64,
            range: "n >= 2",
        });
    }
    let denom = (2 * n - 1) as f64;
    let seeds: Vec<T> = (1..n)
        .map(|i| T::lit(-(2.0 * std::f64::consts::PI * i as f64 / denom).cos()))
        .collect();
    bracketed_roots(n, n - 1, &seeds, |x| radau_polynomial(n - 1, x))
}

/// Forces exact antisymmetry `x_i = -x_{m+1-i}` on a root list of a
/// polynomial with definite parity.
fn symmetrize<T: Real>(roots: &mut [T]) {
    let m = roots.len();
    for i in 0..m / 2 {
        let half = (roots[m - 1 - i] - roots[i]) * T::lit(0.5);
        roots[i] = -half;
        roots[m - 1 - i] = half;
    }
    if m % 2 == 1 {
        roots[m / 2] = T::zero();
    }
}

#[derive(Debug, Clone, Copy)]
struct Bracket<T> {
    lo: T,
    hi: T,
    lo_positive: bool,
}

/// Scans `(-1, 1)` for sign changes of `g`. Exact zeros on the grid are
/// returned as degenerate brackets.
fn scan_brackets<T: Real>(count: usize, g: &impl Fn(T) -> (T, T)) -> Vec<Bracket<T>> {
    let points = (256 * count).max(2048);
    let step = 2.0 / points as f64;
    let mut out = Vec::with_capacity(count);
    let mut last: Option<(T, bool)> = None;
    for j in 1..points {
        let x = T::lit(-1.0 + step * j as f64);
        let v = g(x).0;
        if v == T::zero() {
            out.push(Bracket {
                lo: x,
                hi: x,
                lo_positive: true,
            });
            last = None;
            continue;
        }
        let positive = v > T::zero();
        if let Some((xl, pl)) = last {
            if pl != positive {
                out.push(Bracket {
                    lo: xl,
                    hi: x,
                    lo_positive: pl,
                });
            }
        }
        last = Some((x, positive));
    }
    out
}

fn bracketed_roots<T: Real>(
    n: usize,
    count: usize,
    seeds: &[T],
    g: impl Fn(T) -> (T, T),
) -> Result<Vec<T>> {
    let brackets = scan_brackets(count, &g);
    if brackets.len() != count {
        return Err(Error::Convergence {
            n,
            guess: seeds.first().map_or(f64::NAN, |s| s.to_f64_lossy()),
        });
    }
    let tol = T::lit(1e-15).max(T::epsilon() * T::lit(4.0));
    brackets
        .iter()
        .zip(seeds)
        .map(|(b, &seed)| refine(n, *b, seed, tol, &g))
        .collect()
}

fn refine<T: Real>(
    n: usize,
    bracket: Bracket<T>,
    seed: T,
    tol: T,
    g: &impl Fn(T) -> (T, T),
) -> Result<T> {
    let Bracket {
        mut lo,
        mut hi,
        lo_positive,
    } = bracket;
    if lo == hi {
        return Ok(lo);
    }
    let mut x = if seed > lo && seed < hi {
        seed
    } else {
        (lo + hi) * T::lit(0.5)
    };
    for _ in 0..MAX_ITERATIONS {
        let (v, d) = g(x);
        if v == T::zero() {
            return Ok(x);
        }
        if (v > T::zero()) == lo_positive {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - v / d;
        if !next.is_finite() || next <= lo || next >= hi {
            next = (lo + hi) * T::lit(0.5);
        }
        let converged = (next - x).abs() <= tol || hi - lo <= T::epsilon();
        x = next;
        if converged {
            return Ok(polish(x, g));
        }
    }
    Err(Error::Convergence {
        n,
        guess: seed.to_f64_lossy(),
    })
}

/// Final unguarded Newton step. A noisy sign near the root can shrink the
/// bracket onto the wrong side, leaving the last iterate a few ulps off.
fn polish<T: Real>(x: T, g: &impl Fn(T) -> (T, T)) -> T {
    let (v, d) = g(x);
    let step = v / d;
    if step.is_finite() && step.abs() <= T::epsilon().sqrt() {
        x - step
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn low_degree_values() {
        let p2 = legendre_eval(2, 0.0f64);
        assert_eq!(p2.value, -0.5);
        assert_eq!(p2.derivative, 0.0);
        let p1 = legendre_eval(1, 0.3f64);
        assert_eq!(p1.value, 0.3);
        assert!(close(p1.derivative, 1.0, 1e-15));
    }

    #[test]
    fn p3_vanishes_at_gauss_node() {
        let x = (3.0f64 / 5.0).sqrt();
        let e = legendre_eval(3, x);
        assert!(e.value.abs() < 1e-15);
        // P_3'(x) = (15x² - 3)/2 = 3 at x² = 3/5
        assert!(close(e.derivative, 3.0, 1e-13));
    }

    #[test]
    fn endpoint_derivatives() {
        for n in 0..12usize {
            let expected = (n * (n + 1)) as f64 / 2.0;
            let right = legendre_eval(n, 1.0f64);
            assert_eq!(right.value, 1.0);
            assert!(close(right.derivative, expected, 1e-12));
            let left = legendre_eval(n, -1.0f64);
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            assert!(close(left.derivative, sign * expected, 1e-12));
        }
    }

    #[test]
    fn derivative_branches_agree() {
        for n in 1..25 {
            for &x in &[-0.995f64, -0.7, 0.0, 0.31, 0.994] {
                let (_, d) = legendre_by_recurrence(n, x);
                let e = legendre_eval(n, x);
                assert!(
                    close(e.derivative, d, 1e-10 * (1.0 + d.abs())),
                    "n={n} x={x}"
                );
            }
        }
    }

    #[test]
    fn gauss_roots_small_n() {
        assert_eq!(legendre_roots::<f64>(1).unwrap(), vec![0.0]);
        let r2 = legendre_roots::<f64>(2).unwrap();
        let s3 = 3f64.sqrt() / 3.0;
        assert!(close(r2[0], -s3, 1e-15) && close(r2[1], s3, 1e-15));
        let r3 = legendre_roots::<f64>(3).unwrap();
        let s15 = 15f64.sqrt() / 5.0;
        assert!(close(r3[0], -s15, 1e-15));
        assert_eq!(r3[1], 0.0);
        assert!(close(r3[2], s15, 1e-15));
    }

    #[test]
    fn zero_degree_is_rejected() {
        assert!(matches!(legendre_roots::<f64>(0), Err(Error::Range { .. })));
        assert!(lobatto_interior_roots::<f64>(2).is_err());
        assert!(radau_roots::<f64>(1).is_err());
    }

    #[test]
    fn lobatto_interior_small_n() {
        assert_eq!(lobatto_interior_roots::<f64>(3).unwrap(), vec![0.0]);
        let r4 = lobatto_interior_roots::<f64>(4).unwrap();
        let s = 5f64.sqrt() / 5.0;
        assert!(close(r4[0], -s, 1e-15) && close(r4[1], s, 1e-15));
        let r5 = lobatto_interior_roots::<f64>(5).unwrap();
        let s = (3.0f64 / 7.0).sqrt();
        assert!(close(r5[0], -s, 1e-15) && r5[1] == 0.0 && close(r5[2], s, 1e-15));
    }

    #[test]
    fn radau_small_n() {
        let r2 = radau_roots::<f64>(2).unwrap();
        assert!(close(r2[0], 1.0 / 3.0, 1e-15));
        let r3 = radau_roots::<f64>(3).unwrap();
        let s6 = 6f64.sqrt();
        assert!(close(r3[0], (1.0 - s6) / 5.0, 1e-15));
        assert!(close(r3[1], (1.0 + s6) / 5.0, 1e-15));
    }

    #[test]
    fn radau_polynomial_guard_matches_quotient() {
        for m in 1..15 {
            let x = -1.0 + 2e-8;
            let guarded = radau_polynomial(m, -1.0 + 1e-9f64).0;
            let quotient = radau_polynomial(m, x).0;
            assert!(
                close(guarded, quotient, 1e-5 * (1.0 + quotient.abs())),
                "m={m}"
            );
            // Q_m(-1) = S'(-1) = (-1)^m (m+1)
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            assert!(close(
                radau_polynomial(m, -1.0f64).0,
                sign * (m + 1) as f64,
                1e-12
            ));
        }
    }

    /// Independent oracle: bisection on sign changes of the explicitly
    /// expanded `Q_3` over a 10⁴-point grid.
    #[test]
    fn radau_n4_matches_bisection_oracle() {
        let q3 = |x: f64| {
            let p3 = (5.0 * x * x * x - 3.0 * x) / 2.0;
            let p4 = (35.0 * x.powi(4) - 30.0 * x * x + 3.0) / 8.0;
            (p3 + p4) / (x + 1.0)
        };
        let mut oracle = Vec::new();
        let grid = 10_000;
        for j in 1..grid {
            let (a, b) = (
                -1.0 + 2.0 * j as f64 / grid as f64,
                -1.0 + 2.0 * (j + 1) as f64 / grid as f64,
            );
            if q3(a).signum() != q3(b).signum() {
                let (mut lo, mut hi) = (a, b);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if q3(mid).signum() == q3(lo).signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                oracle.push(0.5 * (lo + hi));
            }
        }
        let roots = radau_roots::<f64>(4).unwrap();
        assert_eq!(oracle.len(), 3);
        for (r, o) in roots.iter().zip(&oracle) {
            assert!(close(*r, *o, 1e-13), "{r} vs {o}");
        }
    }

    #[test]
    fn single_precision_roots() {
        let r = legendre_roots::<f32>(5).unwrap();
        let d = legendre_roots::<f64>(5).unwrap();
        for (a, b) in r.iter().zip(&d) {
            assert!((*a as f64 - b).abs() < 1e-6);
        }
    }
}
