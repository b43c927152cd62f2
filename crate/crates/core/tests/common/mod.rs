//! Test corpus: convex functions with closed-form integrals, random
//! partitions and operators built from them.
#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Func = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Kink locations of truncated powers. All are breakpoints of the 8-panel
/// reference integral.
pub const KINKS: [f64; 4] = [-0.5, 0.0, 0.25, 0.5];

#[derive(Clone)]
pub struct Member {
    pub name: String,
    pub f: Func,
    /// Exact `∫_{-1}^{1} f`.
    pub integral: f64,
    /// Degree when the member is a polynomial.
    pub degree: Option<usize>,
}

impl Member {
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn new(
        name: String,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        integral: f64,
        degree: Option<usize>,
    ) -> Self {
        Member {
            name,
            f: Arc::new(f),
            integral,
            degree,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `exp(c x)`.
pub fn exp_scaled(c: f64) -> Member {
    let integral = if c == 0.0 { 2.0 } else { 2.0 * c.sinh() / c };
    Member::new(
        format!("exp({c}*x)"),
        move |x| (c * x).exp(),
        integral,
        None,
    )
}

/// `x^m`.
pub fn monomial(m: usize) -> Member {
    let integral = if m.is_multiple_of(2) {
        2.0 / (m + 1) as f64
    } else {
        0.0
    };
    Member::new(
        format!("x^{m}"),
        move |x| x.powi(m as i32),
        integral,
        Some(m),
    )
}

/// `Σ c_j x^j`.
pub fn polynomial(coefficients: Vec<f64>) -> Member {
    let integral = coefficients
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if j % 2 == 0 {
                2.0 * c / (j + 1) as f64
            } else {
                0.0
            }
        })
        .sum();
    let degree = coefficients.len().saturating_sub(1);
    let name = format!("poly{coefficients:?}");
    Member::new(
        name,
        move |x| coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c),
        integral,
        Some(degree),
    )
}

/// `(x - c)_+^m`.
pub fn trunc_right(c: f64, m: usize) -> Member {
    Member::new(
        format!("max(x - {c}, 0)^{m}"),
        move |x| (x - c).max(0.0).powi(m as i32),
        (1.0 - c).powi(m as i32 + 1) / (m + 1) as f64,
        None,
    )
}

/// `(c - x)_+^m`.
pub fn trunc_left(c: f64, m: usize) -> Member {
    Member::new(
        format!("max({c} - x, 0)^{m}"),
        move |x| (c - x).max(0.0).powi(m as i32),
        (1.0 + c).powi(m as i32 + 1) / (m + 1) as f64,
        None,
    )
}

pub fn negate(m: &Member) -> Member {
    let f = m.f.clone();
    Member::new(
        format!("-({})", m.name),
        move |x| -f(x),
        -m.integral,
        m.degree,
    )
}

/// Random conical combination of two or three members.
pub fn conical(rng: &mut impl Rng, parts: &[Member]) -> Member {
    let count = rng.gen_range(2..=3);
    let picked: Vec<(f64, Member)> = (0..count)
        .map(|_| {
            (
                rng.gen_range(0.05..2.0),
                parts[rng.gen_range(0..parts.len())].clone(),
            )
        })
        .collect();
    let name = picked
        .iter()
        .map(|(c, m)| format!("{c:.3}*{}", m.name))
        .collect::<Vec<_>>()
        .join(" + ");
    let integral = picked.iter().map(|(c, m)| c * m.integral).sum();
    let degree = picked
        .iter()
        .map(|(_, m)| m.degree)
        .try_fold(0, |acc, d| d.map(|d| acc.max(d)));
    Member::new(
        name,
        move |x| picked.iter().map(|(c, m)| c * m.eval(x)).sum(),
        integral,
        degree,
    )
}

fn fill(mut base: Vec<Member>, size: usize, seed: u64) -> Vec<Member> {
    let mut r = rng(seed);
    let pool = base.clone();
    while base.len() < size {
        base.push(conical(&mut r, &pool));
    }
    base
}

/// 25 functions with nonnegative derivative of order `2n`, hence
/// (2n−1)-convex on `[-1, 1]`.
pub fn odd_corpus(n: usize, seed: u64) -> Vec<Member> {
    let k = 2 * n;
    let mut base: Vec<Member> = [1.0, -1.0, 0.5, 2.0, -1.5, 3.0]
        .into_iter()
        .map(exp_scaled)
        .collect();
    base.extend([k, k + 2, k + 4].map(monomial));
    base.push(monomial(k - 1));
    let mut low = vec![0.3, -0.7];
    if k > 2 {
        low.resize(k, 0.0);
        low[2] = 1.0;
        low[k - 1] = -2.0;
    }
    base.push(polynomial(low));
    for c in [-0.5, 0.0, 0.5] {
        base.push(trunc_right(c, k - 1));
    }
    base.push(trunc_right(0.25, k));
    base.push(trunc_left(0.0, k));
    base.push(trunc_left(-0.5, k));
    fill(base, 25, seed)
}

/// 25 functions with nonnegative derivative of order `2n + 1`, hence
/// 2n-convex on `[-1, 1]`.
pub fn even_corpus(n: usize, seed: u64) -> Vec<Member> {
    let k = 2 * n;
    let mut base: Vec<Member> = [1.0, 0.5, 2.0, 3.0, 1.5]
        .into_iter()
        .map(exp_scaled)
        .collect();
    base.extend([k + 1, k + 3].map(monomial));
    base.push(monomial(k));
    let mut low = vec![0.5, -1.0];
    low.resize(k + 1, 0.0);
    low[k] = -2.0;
    base.push(polynomial(low));
    for c in KINKS {
        base.push(trunc_right(c, k));
    }
    base.push(trunc_right(0.0, k + 1));
    base.push(negate(&trunc_left(0.0, k)));
    base.push(negate(&trunc_left(0.5, k)));
    fill(base, 25, seed)
}

/// Kink-free functions for derivative and parser tests, as expression text.
pub const SMOOTH_EXPRESSIONS: [&str; 12] = [
    "exp(x)",
    "exp(2*x) - 3*x^2",
    "sin(3*x) + cos(x)",
    "log(2 + x)",
    "sqrt(1.5 + x)",
    "1/(1 + x^2)",
    "x^5 - 2*x^3 + x",
    "exp(-x^2)",
    "x*sin(x)",
    "cos(x)^3",
    "(x + 3)^(-2)",
    "exp(x)/(2 + x)",
];

/// Random breakpoints `-1 = t_0 < … < t_m = 1` with `m` between 2 and 6.
pub fn random_partition(rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let interior = rng.gen_range(1..=5);
        let mut t: Vec<f64> = (0..interior).map(|_| rng.gen_range(-0.95..0.95)).collect();
        t.push(-1.0);
        t.push(1.0);
        t.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if t.windows(2).all(|w| w[1] - w[0] > 1e-3) {
            return t;
        }
    }
}
