mod common;

use proptest::prelude::*;

use quadext::convexity::divided_difference;
use quadext::orthopoly::{legendre_eval, legendre_roots, lobatto_interior_roots, radau_roots};
use quadext::rules::{gauss_legendre, radau_left, radau_right, Family};
use quadext::{parse, Operator, Rule};

/// Coefficients of `P_n` in the monomial basis, from the explicit sum
/// `P_n(x) = 2^{-n} Σ_k (-1)^k C(n,k) C(2n-2k, n) x^{n-2k}`.
fn legendre_coefficients(n: usize) -> Vec<f64> {
    fn binom(n: usize, k: usize) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }
    let mut c = vec![0.0; n + 1];
    for k in 0..=n / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        c[n - 2 * k] = sign * binom(n, k) * binom(2 * n - 2 * k, n) / 2f64.powi(n as i32);
    }
    c
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn any_rule() -> impl Strategy<Value = Rule> {
    (0usize..4, 1usize..=30).prop_filter_map("order below family minimum", |(f, n)| {
        let family = Family::ALL[f];
        (n >= family.min_order()).then(|| Rule::new(family, n).unwrap())
    })
}

fn check_roots(roots: &[f64], symmetric: bool) {
    assert!(roots.windows(2).all(|w| w[0] < w[1]));
    assert!(roots.iter().all(|&x| -1.0 < x && x < 1.0));
    if symmetric {
        let m = roots.len();
        for i in 0..m {
            assert!((roots[i] + roots[m - 1 - i]).abs() <= 1e-13);
        }
    }
}

#[test]
fn root_lists_are_ordered_interior_and_symmetric() {
    for n in 1..=30 {
        let g = legendre_roots::<f64>(n).unwrap();
        check_roots(&g, true);
        for &x in &g {
            assert!(legendre_eval(n, x).value.abs() < 1e-12, "P_{n}({x})");
        }
        if n >= 3 {
            let l = lobatto_interior_roots::<f64>(n).unwrap();
            check_roots(&l, true);
            for &x in &l {
                assert!(legendre_eval(n - 1, x).derivative.abs() < 1e-9 * (n * n) as f64);
            }
        }
        if n >= 2 {
            check_roots(&radau_roots::<f64>(n).unwrap(), false);
        }
    }
}

#[test]
fn weights_positive_and_sum_to_two() {
    for family in Family::ALL {
        for n in family.min_order()..=30 {
            let r = Rule::new(family, n).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0), "{}", r.id());
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() <= 1e-12, "{}: {s}", r.id());
        }
    }
}

proptest! {
    #[test]
    fn recurrence_matches_expanded_coefficients(n in 0usize..=10, x in -1.0f64..=1.0) {
        let c = legendre_coefficients(n);
        prop_assert!((legendre_eval(n, x).value - horner(&c, x)).abs() <= 1e-13);
    }

    #[test]
    fn radau_right_is_mirrored_left(n in 2usize..=30, c in proptest::collection::vec(-2.0f64..2.0, 1..8), s in -3.0f64..3.0) {
        let f = |x: f64| (s * x).exp() + horner(&c, x);
        let l = radau_left::<f64>(n).unwrap();
        let r = radau_right::<f64>(n).unwrap();
        prop_assert_eq!(r.apply(f).to_bits(), l.apply(|x| f(-x)).to_bits());
    }

    #[test]
    fn unit_interval_transfer_is_bitwise(rule in any_rule(), s in -3.0f64..3.0) {
        let f = |x: f64| (s * x).sin() + x * x;
        prop_assert_eq!(rule.apply_on_interval(f, -1.0, 1.0).unwrap().to_bits(), rule.apply(f).to_bits());
    }

    #[test]
    fn from_rule_is_bitwise(rule in any_rule(), s in -3.0f64..3.0) {
        let f = |x: f64| (s * x).exp();
        prop_assert_eq!(Operator::from_rule(&rule).apply(f).to_bits(), rule.apply(f).to_bits());
    }

    #[test]
    fn operators_are_linear(i in 0usize..12, j in 0usize..12, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let f = parse(common::SMOOTH_EXPRESSIONS[i]).unwrap();
        let g = parse(common::SMOOTH_EXPRESSIONS[j]).unwrap();
        let ops = [
            Operator::hybrid_example(),
            Operator::from_rule(&gauss_legendre(5).unwrap()),
            Operator::from_rule(&radau_right(4).unwrap()),
        ];
        for op in &ops {
            let fv = op.apply(|x| f.eval(x).unwrap());
            let gv = op.apply(|x| g.eval(x).unwrap());
            let both = op.apply(|x| a * f.eval(x).unwrap() + b * g.eval(x).unwrap());
            prop_assert!((both - a * fv - b * gv).abs() <= 1e-12 * (1.0 + a.abs() + b.abs()));
        }
    }

    #[test]
    fn operators_are_positive(
        cuts in proptest::collection::vec(-1.0f64..1.0, 1..5),
        coeffs in proptest::collection::vec(0.0f64..2.0, 1..5),
        degree in 0usize..6,
    ) {
        // Σ c_i (x - t_i)_+^d is nonnegative and piecewise polynomial.
        let f = |x: f64| cuts.iter().zip(&coeffs).map(|(&t, &c)| c * (x - t).max(0.0).powi(degree as i32)).sum::<f64>();
        let ops = [
            Operator::hybrid_example(),
            Operator::from_rule(&gauss_legendre(3).unwrap()),
            gauss_legendre::<f64>(2).unwrap().composite(&[-1.0, -0.2, 0.6, 1.0]).unwrap(),
        ];
        for op in &ops {
            prop_assert!(op.apply(f) >= -1e-12);
        }
    }

    #[test]
    fn divided_differences_ignore_order(
        mut xs in proptest::collection::hash_set(-100i32..100, 2..8).prop_map(|s| s.into_iter().map(|v| v as f64 / 100.0).collect::<Vec<_>>()),
        seed in any::<u64>(),
    ) {
        let fs: Vec<f64> = xs.iter().map(|&x| (1.3 * x).exp()).collect();
        let base = divided_difference(&xs, &fs).unwrap();
        let mut pairs: Vec<(f64, f64)> = xs.iter().copied().zip(fs.iter().copied()).collect();
        let mut state = seed;
        for i in (1..pairs.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            pairs.swap(i, (state >> 33) as usize % (i + 1));
        }
        xs = pairs.iter().map(|p| p.0).collect();
        let shuffled: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let v = divided_difference(&xs, &shuffled).unwrap();
        prop_assert!((v - base).abs() <= 1e-12 * base.abs().max(1.0));
    }

    #[test]
    fn divided_differences_annihilate_low_degree(
        xs in proptest::collection::hash_set(-50i32..50, 3..8).prop_map(|s| s.into_iter().map(|v| v as f64 / 50.0).collect::<Vec<_>>()),
        c in proptest::collection::vec(-1.0f64..1.0, 8),
    ) {
        // a polynomial of degree len - 2 over len points
        let degree = xs.len() - 2;
        let poly = &c[..=degree];
        let fs: Vec<f64> = xs.iter().map(|&x| horner(poly, x)).collect();
        let scale: f64 = fs.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        let mut sorted = xs.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let spacing = sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let v = divided_difference(&xs, &fs).unwrap();
        prop_assert!(v.abs() <= 1e-10 * scale / spacing.powi(degree as i32 + 1));
    }
}
