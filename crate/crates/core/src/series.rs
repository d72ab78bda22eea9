//! Truncated power series in `x` whose coefficients are polynomials in `u`.
//!
//! The integrand polynomial `p_k(u)` of the order-`k` exponential formula is
//! produced three ways: from its recurrence, from the `x^k` coefficient of the
//! generating function `-x·e^{(1-u)x}/(e^x - e^{2πb})`, and from the
//! polylogarithm closed form. The trigonometric formulas use the Taylor
//! coefficients of
//!
//! ```text
//! cos_f(x) = x·cos(x(1-u)) / (cos x - cos 2πb)      cos_g(x) = sin x · cos_f(x)
//! sin_f(x) = x·sin(x(1-u)) / (cos x - cos 2πb)      sin_g(x) = sin x · sin_f(x)
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::polylog::delta_polylog_coeffs;
use crate::{ComplexScalar, Error, Result, K_MAX};

/// Extra orders carried beyond `K_MAX`.
pub const GUARD_TERMS: usize = 4;

/// Truncation order of every series built here.
pub const SERIES_ORDER: usize = K_MAX + GUARD_TERMS;

/// A constant term smaller than this (relative to 1) is not inverted.
pub const RECIPROCAL_EPS: f64 = 1e-9;

fn zero() -> ComplexScalar {
    ComplexScalar::new(0.0, 0.0)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, m| acc * m as f64)
}

/// Polynomial in the integration variable `u`; index = power of `u`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct UPolynomial {
    coeffs: Vec<ComplexScalar>,
}

impl UPolynomial {
    pub fn new(coeffs: Vec<ComplexScalar>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: ComplexScalar) -> Self {
        Self::new(vec![c])
    }

    /// `(1 - u)^m / m!`
    pub fn one_minus_u_pow(m: usize) -> Self {
        let mut coeffs = vec![zero(); m + 1];
        // C(m, i)·(-1)^i / m! = (-1)^i / (i!·(m-i)!)
        for (i, c) in coeffs.iter_mut().enumerate() {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            *c = ComplexScalar::new(sign / (factorial(i) * factorial(m - i)), 0.0);
        }
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[ComplexScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, power: usize) -> ComplexScalar {
        self.coeffs.get(power).copied().unwrap_or_else(zero)
    }

    /// Value of a degree-zero (or zero) polynomial.
    pub fn as_constant(&self) -> Option<ComplexScalar> {
        match self.coeffs.len() {
            0 => Some(zero()),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn eval(&self, u: f64) -> ComplexScalar {
        self.coeffs.iter().rev().fold(zero(), |acc, &c| acc * u + c)
    }

    pub fn scale(&self, s: ComplexScalar) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Largest coefficient-wise modulus of `self - other`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|i| (self.coeff(i) - other.coeff(i)).norm())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Display for UPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| format!("({} + {}i)·u^{}", c.re, c.im, i))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &UPolynomial {
    type Output = UPolynomial;
    fn add(self, rhs: &UPolynomial) -> UPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UPolynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UPolynomial {
    type Output = UPolynomial;
    fn sub(self, rhs: &UPolynomial) -> UPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UPolynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &UPolynomial {
    type Output = UPolynomial;
    fn neg(self) -> UPolynomial {
        UPolynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &UPolynomial {
    type Output = UPolynomial;
    fn mul(self, rhs: &UPolynomial) -> UPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return UPolynomial::zero();
        }
        let mut out = vec![zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            for (j, &y) in rhs.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        UPolynomial::new(out)
    }
}

/// Power series in `x` truncated after `x^order`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    order: usize,
    coeffs: Vec<UPolynomial>,
}

impl TruncatedSeries {
    /// Pads with zeros or drops terms beyond `order`.
    pub fn new(order: usize, mut coeffs: Vec<UPolynomial>) -> Self {
        coeffs.resize(order + 1, UPolynomial::zero());
        Self { order, coeffs }
    }

    /// Series with constant (in `u`) coefficients.
    pub fn from_scalars(order: usize, coeffs: &[ComplexScalar]) -> Self {
        Self::new(
            order,
            coeffs.iter().map(|&c| UPolynomial::constant(c)).collect(),
        )
    }

    pub fn one(order: usize) -> Self {
        Self::from_scalars(order, &[ComplexScalar::new(1.0, 0.0)])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[UPolynomial] {
        &self.coeffs
    }

    /// Coefficient of `x^power`; asking past the truncation order is an error.
    pub fn coeff(&self, power: usize) -> Result<&UPolynomial> {
        self.coeffs.get(power).ok_or(Error::CapExceeded {
            what: "series coefficient index",
            requested: power,
            cap: self.order,
        })
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(
            self.order, other.order,
            "series truncation orders must match"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_order(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x + y)
            .collect();
        Self::new(self.order, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_order(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x - y)
            .collect();
        Self::new(self.order, coeffs)
    }

    pub fn scale(&self, s: ComplexScalar) -> Self {
        Self::new(self.order, self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    /// Multiplies by `x`, dropping the term that falls off the end.
    pub fn shift_x(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.order + 1);
        coeffs.push(UPolynomial::zero());
        coeffs.extend(self.coeffs[..self.order].iter().cloned());
        Self::new(self.order, coeffs)
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_order(other);
        let coeffs = (0..=self.order)
            .map(|m| {
                (0..=m).fold(UPolynomial::zero(), |acc, i| {
                    &acc + &(&self.coeffs[i] * &other.coeffs[m - i])
                })
            })
            .collect();
        Self::new(self.order, coeffs)
    }

    /// Multiplicative inverse; the constant term must be a nonzero constant.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0].as_constant().ok_or_else(|| {
            Error::InvalidArgument("series constant term depends on u".into())
        })?;
        if !(c0.norm() > RECIPROCAL_EPS) {
            return Err(Error::NotInvertible {
                magnitude: c0.norm(),
            });
        }
        let inv0 = c0.inv();
        let mut out: Vec<UPolynomial> = Vec::with_capacity(self.order + 1);
        out.push(UPolynomial::constant(inv0));
        for m in 1..=self.order {
            let acc = (1..=m).fold(UPolynomial::zero(), |acc, i| {
                &acc + &(&self.coeffs[i] * &out[m - i])
            });
            out.push(acc.scale(-inv0));
        }
        Ok(Self::new(self.order, out))
    }

    /// Largest coefficient-wise deviation over all orders.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x.max_deviation(y))
            .fold(0.0, f64::max)
    }
}

/// `e^x`
pub fn exp_series(order: usize) -> TruncatedSeries {
    let c: Vec<ComplexScalar> = (0..=order)
        .map(|m| ComplexScalar::new(1.0 / factorial(m), 0.0))
        .collect();
    TruncatedSeries::from_scalars(order, &c)
}

/// `cos x`
pub fn cos_series(order: usize) -> TruncatedSeries {
    let c: Vec<ComplexScalar> = (0..=order)
        .map(|m| match m % 4 {
            0 => 1.0 / factorial(m),
            2 => -1.0 / factorial(m),
            _ => 0.0,
        })
        .map(|v| ComplexScalar::new(v, 0.0))
        .collect();
    TruncatedSeries::from_scalars(order, &c)
}

/// `sin x`
pub fn sin_series(order: usize) -> TruncatedSeries {
    let c: Vec<ComplexScalar> = (0..=order)
        .map(|m| match m % 4 {
            1 => 1.0 / factorial(m),
            3 => -1.0 / factorial(m),
            _ => 0.0,
        })
        .map(|v| ComplexScalar::new(v, 0.0))
        .collect();
    TruncatedSeries::from_scalars(order, &c)
}

/// `e^{(1-u)x}`: coefficients `(1-u)^m / m!`.
pub fn exp_shifted_series(order: usize) -> TruncatedSeries {
    TruncatedSeries::new(order, (0..=order).map(UPolynomial::one_minus_u_pow).collect())
}

/// `cos(x(1-u))`: coefficients `(-1)^m (1-u)^{2m} / (2m)!` at `x^{2m}`.
pub fn cos_shifted_series(order: usize) -> TruncatedSeries {
    let coeffs = (0..=order)
        .map(|p| match p % 4 {
            0 => UPolynomial::one_minus_u_pow(p),
            2 => -&UPolynomial::one_minus_u_pow(p),
            _ => UPolynomial::zero(),
        })
        .collect();
    TruncatedSeries::new(order, coeffs)
}

/// `sin(x(1-u))`: coefficients `(-1)^m (1-u)^{2m+1} / (2m+1)!` at `x^{2m+1}`.
pub fn sin_shifted_series(order: usize) -> TruncatedSeries {
    let coeffs = (0..=order)
        .map(|p| match p % 4 {
            1 => UPolynomial::one_minus_u_pow(p),
            3 => -&UPolynomial::one_minus_u_pow(p),
            _ => UPolynomial::zero(),
        })
        .collect();
    TruncatedSeries::new(order, coeffs)
}

pub fn series_mul(s1: &TruncatedSeries, s2: &TruncatedSeries) -> TruncatedSeries {
    s1.mul(s2)
}

pub fn series_reciprocal(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    s.reciprocal()
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > K_MAX {
        return Err(Error::CapExceeded {
            what: "power k",
            requested: k,
            cap: K_MAX,
        });
    }
    Ok(())
}

fn exp_denominator(b: ComplexScalar) -> Result<ComplexScalar> {
    let d = (b * (2.0 * PI)).exp() - 1.0;
    if !(d.norm() > RECIPROCAL_EPS) {
        return Err(Error::Validity(format!(
            "e^(2πb) = 1 for b = {} + {}i",
            b.re, b.im
        )));
    }
    Ok(d)
}

/// `p_k(u)` from `(e^{2πb} - 1)·p_k = (1-u)^{k-1}/(k-1)! + Σ_{j<k} p_j/(k-j)!`,
/// with `(e^{2πb} - 1)·p_1 = 1`.
pub fn pk_from_recurrence(k: usize, b: ComplexScalar) -> Result<UPolynomial> {
    check_k(k)?;
    let inv = exp_denominator(b)?.inv();
    let mut ps: Vec<UPolynomial> = Vec::with_capacity(k);
    ps.push(UPolynomial::constant(inv));
    for m in 2..=k {
        let rhs = (1..m).fold(UPolynomial::one_minus_u_pow(m - 1), |acc, j| {
            let w = ComplexScalar::new(1.0 / factorial(m - j), 0.0);
            &acc + &ps[j - 1].scale(w)
        });
        ps.push(rhs.scale(inv));
    }
    Ok(ps.pop().expect("k >= 1"))
}

/// `x^k` coefficient of `-x·e^{(1-u)x} / (e^x - e^{2πb})`.
pub fn pk_from_generating(k: usize, b: ComplexScalar) -> Result<UPolynomial> {
    check_k(k)?;
    exp_denominator(b)?;
    let order = SERIES_ORDER;
    let shift = (b * (2.0 * PI)).exp();
    let denom = exp_series(order).sub(&TruncatedSeries::from_scalars(order, &[shift]));
    let gen = exp_shifted_series(order)
        .shift_x()
        .mul(&denom.reciprocal()?)
        .scale(ComplexScalar::new(-1.0, 0.0));
    gen.coeff(k).cloned()
}

/// `e^{-2πb'}·Σ_{j=1..k} c_j (1-u)^{k-j} / ((j-1)!(k-j)!)` with
/// `c_j = δ_{1j} + Li_{1-j}(e^{-2πb'})` and `b' = b/a`.
pub fn pk_closed_form(k: usize, b_over_a: ComplexScalar) -> Result<UPolynomial> {
    check_k(k)?;
    let w = (-b_over_a * (2.0 * PI)).exp();
    let cs = delta_polylog_coeffs(k, w).map_err(|_| {
        Error::Validity(format!(
            "e^(-2πb/a) = 1 for b/a = {} + {}i",
            b_over_a.re, b_over_a.im
        ))
    })?;
    let sum = cs
        .iter()
        .enumerate()
        .fold(UPolynomial::zero(), |acc, (idx, &c)| {
            let j = idx + 1;
            // (1-u)^{k-j}/(k-j)! is one_minus_u_pow; the 1/(j-1)! goes on the weight.
            let term = UPolynomial::one_minus_u_pow(k - j).scale(c / factorial(j - 1));
            &acc + &term
        });
    Ok(sum.scale(w))
}

/// Generating function selector for the trigonometric formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigGenerator {
    CosF,
    CosG,
    SinF,
    SinG,
}

impl TrigGenerator {
    pub const ALL: [TrigGenerator; 4] = [Self::CosF, Self::CosG, Self::SinF, Self::SinG];

    /// True when the Taylor coefficients vanish at even orders.
    pub fn is_odd(self) -> bool {
        matches!(self, Self::CosF | Self::SinG)
    }
}

/// Series of the chosen trigonometric generating function, truncated at `order`.
pub fn trig_generating_series(
    which: TrigGenerator,
    b: ComplexScalar,
    order: usize,
) -> Result<TruncatedSeries> {
    let c = (b * (2.0 * PI)).cos();
    if !((c - 1.0).norm() > RECIPROCAL_EPS) {
        return Err(Error::Validity(format!(
            "cos 2πb = 1 for b = {} + {}i",
            b.re, b.im
        )));
    }
    let denom = cos_series(order).sub(&TruncatedSeries::from_scalars(order, &[c]));
    let inner = match which {
        TrigGenerator::CosF | TrigGenerator::CosG => cos_shifted_series(order),
        TrigGenerator::SinF | TrigGenerator::SinG => sin_shifted_series(order),
    };
    let f = inner.shift_x().mul(&denom.reciprocal()?);
    Ok(match which {
        TrigGenerator::CosF | TrigGenerator::SinF => f,
        TrigGenerator::CosG | TrigGenerator::SinG => sin_series(order).mul(&f),
    })
}

/// `h^{(k)}(0)/k!` for the chosen generating function `h`.
pub fn trig_taylor_coeff(which: TrigGenerator, k: usize, b: ComplexScalar) -> Result<UPolynomial> {
    check_k(k)?;
    trig_generating_series(which, b, SERIES_ORDER)?.coeff(k).cloned()
}

/// Largest `k` accepted by [`qk_from_recurrence`], so that `2k + 1 ≤ K_MAX`.
pub const QK_MAX: usize = (K_MAX - 1) / 2;

/// `q_k(u) = (-1)^k/(2 sin²πb)·((1-u)^{2k}/(2k)! - Σ_{j<k} (-1)^j q_j/(2k-2j)!)`.
pub fn qk_from_recurrence(k: usize, b: ComplexScalar) -> Result<UPolynomial> {
    if k > QK_MAX {
        return Err(Error::CapExceeded {
            what: "q index k",
            requested: k,
            cap: QK_MAX,
        });
    }
    let s = (b * PI).sin();
    if !(s.norm() > RECIPROCAL_EPS) {
        return Err(Error::Validity(format!(
            "sin πb = 0 for b = {} + {}i",
            b.re, b.im
        )));
    }
    let inv = (s * s * 2.0).inv();
    let mut qs: Vec<UPolynomial> = Vec::with_capacity(k + 1);
    for m in 0..=k {
        let bracket = (0..m).fold(UPolynomial::one_minus_u_pow(2 * m), |acc, j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let w = ComplexScalar::new(sign / factorial(2 * m - 2 * j), 0.0);
            &acc - &qs[j].scale(w)
        });
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        qs.push(bracket.scale(inv * sign));
    }
    Ok(qs.pop().expect("k + 1 entries"))
}
