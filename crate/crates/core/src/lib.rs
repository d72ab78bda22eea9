//! Partial sums of generalized harmonic progressions
//!
//! `HP_k(n) = Σ_{j=1..n} 1/(a·i·j + b)^k` with integer `a` and complex `b`,
//! evaluated through closed-form integral representations and checked against
//! term-by-term summation.
//!
//! Module map:
//! - [`scalar`]: exact Bernoulli numbers, Faulhaber power sums, direct summation.
//! - [`polylog`]: polylogarithm at non-positive integer order.
//! - [`series`]: truncated power series over polynomials in `u`; the integrand
//!   polynomials `p_k(u)`, `q_k(u)` and the trigonometric generating functions.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration on `[0, 1]` and the
//!   guarded `sin(πanu)·cot(πau)` kernel.
//! - [`hp`]: the closed-form evaluators and identity checks.
//! - [`rational`]: sums of `1/p(j)` through partial fractions.
//! - [`verify`]: parameter sweeps shared by the CLI.
//! - [`cli`]: command-line front end.

// `!(x > eps)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod hp;
pub mod polylog;
pub mod quadrature;
pub mod rational;
pub mod scalar;
pub mod series;
pub mod verify;

pub use error::{Error, Result};

/// Double-precision complex value used by every formula.
pub type ComplexScalar = num::Complex<f64>;

/// Largest power `k` supported by the series engine and the evaluators.
pub const K_MAX: usize = 10;

/// Imaginary unit.
pub const I: ComplexScalar = ComplexScalar::new(0.0, 1.0);
