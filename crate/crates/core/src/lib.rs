//! Gaussian-family quadrature rules, higher-order convexity and the
//! extremality inequalities that pin positive integration operators between
//! canonical rules.
//!
//! The numerical core is generic over [`Real`] (implemented for `f32` and
//! `f64`). Error-term constants are exact rationals. Concrete `f64` aliases
//! are exported at the crate root for the common case.
//!
//! ```
//! use quadext::{gauss_legendre, lobatto, Rule};
//!
//! let g2: Rule = gauss_legendre(2).unwrap();
//! let l3: Rule = lobatto(3).unwrap();
//! let exact = std::f64::consts::E - 1.0 / std::f64::consts::E;
//! assert!(g2.apply(f64::exp) <= exact && exact <= l3.apply(f64::exp));
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod convexity;
mod error;
pub mod expr;
pub mod extremality;
pub mod operators;
pub mod orthopoly;
pub mod rules;
mod scalar;

pub use bounds::{
    alpha, certified_integrate, classical_error_constant, error_bound, min_points,
    ErrorCertificate, RationalConstant,
};
pub use convexity::{
    divided_difference, hermite_divided_difference, integrate_polynomial, is_n_convex_on_grid,
    support_polynomial, verify_support, DividedDiffNode, NewtonPolynomial, Side, SupportKind,
};
pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use extremality::{
    check_even_sandwich, check_midpoint_trapezoid, check_odd_sandwich, hadamard_chain, Parity,
    SandwichReport,
};
pub use operators::PositiveLinearOperator;
pub use rules::{
    gauss_legendre, lobatto, radau_left, radau_right, ExactnessReport, Family, MomentBasis,
    QuadratureRule,
};
pub use scalar::Real;

/// Double-precision quadrature rule.
pub type Rule = QuadratureRule<f64>;
/// Single-precision quadrature rule.
pub type Rule32 = QuadratureRule<f32>;
/// Double-precision positive linear operator.
pub type Operator = PositiveLinearOperator<f64>;
pub type Operator32 = PositiveLinearOperator<f32>;
/// Double-precision Newton-form polynomial.
pub type Newton = NewtonPolynomial<f64>;
pub type Newton32 = NewtonPolynomial<f32>;
pub type Report = SandwichReport<f64>;
