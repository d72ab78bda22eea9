//! Closed-form evaluators of harmonic-progression partial sums.
//!
//! Every evaluator returns boundary terms plus a prefactor times an integral
//! over `[0, 1]`. All integrands are rewritten so that the only removable
//! singularity left is the guarded [`kernel_sin_cot`]:
//!
//! ```text
//! (cos 2π(an+b)u - cos 2πbu)·cot πau = -2 sin(π(an+2b)u) · sin(πanu)cot(πau)
//! (sin 2π(an+b)u - sin 2πbu)·cot πau =  2 cos(π(an+2b)u) · sin(πanu)cot(πau)
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quadrature::{integrate_with, kernel_sin_cot, QuadratureOptions, QuadratureResult};
use crate::scalar::{distance_to_integer, BernoulliTable, HPParams};
use crate::series::{pk_closed_form, trig_taylor_coeff, TrigGenerator, UPolynomial};
use crate::{ComplexScalar, Error, Result, I, K_MAX};

/// A parameter within this distance of a forbidden value is rejected.
pub const VALIDITY_EPS: f64 = 1e-9;

/// A parameter within this distance of a forbidden value gets a warning note.
pub const NEAR_VALIDITY_WARN: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Exp,
    RealShift,
    Cos,
    Sin,
    IntegerEven,
    IntegerOdd,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Exp => "exp",
            Method::RealShift => "real_shift",
            Method::Cos => "cos",
            Method::Sin => "sin",
            Method::IntegerEven => "integer_even",
            Method::IntegerOdd => "integer_odd",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodReport {
    pub value: ComplexScalar,
    pub method: Method,
    pub quadrature: Option<QuadratureResult>,
    pub validity_notes: Vec<String>,
}

impl MethodReport {
    pub fn direct(value: ComplexScalar) -> Self {
        Self {
            value,
            method: Method::Direct,
            quadrature: None,
            validity_notes: Vec::new(),
        }
    }

    /// True unless an integral was involved and failed to converge.
    pub fn converged(&self) -> bool {
        self.quadrature.is_none_or(|q| q.converged)
    }

    pub fn record(&self) -> ReportRecord {
        ReportRecord {
            value: [self.value.re, self.value.im],
            method: self.method,
            quad_error: self.quadrature.map(|q| q.error_estimate),
            evals: self.quadrature.map(|q| q.evaluations),
            notes: self.validity_notes.clone(),
        }
    }
}

/// Stable serialized form of a [`MethodReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub value: [f64; 2],
    pub method: Method,
    pub quad_error: Option<f64>,
    pub evals: Option<usize>,
    pub notes: Vec<String>,
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    Ok(())
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 || k as usize > K_MAX {
        return Err(Error::CapExceeded {
            what: "power k",
            requested: k as usize,
            cap: K_MAX,
        });
    }
    Ok(())
}

fn near_note(notes: &mut Vec<String>, what: &str, distance: f64) {
    if distance < NEAR_VALIDITY_WARN {
        notes.push(format!(
            "{what} is {distance:.1e} from a forbidden value; accuracy may degrade"
        ));
    }
}

fn quad_note(notes: &mut Vec<String>, q: &QuadratureResult) {
    if !q.converged {
        notes.push(format!(
            "quadrature did not converge (error estimate {:.3e})",
            q.error_estimate
        ));
    }
}

/// Integrates `poly(u)·weight(u)·sin(πanu)cot(πau)` to a tolerance chosen so
/// that the error, once multiplied by `prefactor`, stays below `tol`.
fn integrate_kernel<W>(
    poly: &UPolynomial,
    weight: W,
    n: u64,
    a: i64,
    prefactor: ComplexScalar,
    tol: f64,
) -> QuadratureResult
where
    W: Fn(f64) -> ComplexScalar,
{
    let scale = prefactor.norm().max(f64::MIN_POSITIVE);
    let opts = QuadratureOptions::with_tol(tol / scale).for_frequency(n.saturating_mul(a.unsigned_abs()));
    integrate_with(
        |u| poly.eval(u) * weight(u) * kernel_sin_cot(n, a, u),
        &opts,
    )
}

fn boundary_terms(first: ComplexScalar, last: ComplexScalar, k: u32) -> ComplexScalar {
    let k = k as i32;
    -first.powi(-k) * 0.5 + last.powi(-k) * 0.5
}

/// `Σ_{j=1..n} 1/(a·i·j + b)` from the unreduced order-one formula
///
/// `-1/(2b) + 1/(2(ain+b)) + 2π/(e^{2πb}-1)·∫ e^{π(ain+2b)u} sin(πanu)cot(πau) du`,
///
/// valid for integer `a` and `i·b ∉ ℤ`.
pub fn hp1_exponential(a: i64, b: ComplexScalar, n: u64, tol: f64) -> Result<MethodReport> {
    check_tol(tol)?;
    let params = HPParams::new(a, b, 1, n)?;
    let obstruction = distance_to_integer(I * b);
    if obstruction <= VALIDITY_EPS {
        return Err(Error::Validity(format!(
            "i·b = {} + {}i is an integer",
            (I * b).re,
            (I * b).im
        )));
    }
    let mut notes = Vec::new();
    near_note(&mut notes, "i·b", obstruction);

    let prefactor = ComplexScalar::new(2.0 * PI, 0.0) / ((b * (2.0 * PI)).exp() - 1.0);
    let freq = (I * (a as f64 * n as f64) + b * 2.0) * PI;
    let q = integrate_kernel(
        &UPolynomial::constant(ComplexScalar::new(1.0, 0.0)),
        |u| (freq * u).exp(),
        n,
        a,
        prefactor,
        tol,
    );
    quad_note(&mut notes, &q);
    Ok(MethodReport {
        value: boundary_terms(b, params.term_base(n), 1) + prefactor * q.value,
        method: Method::Exp,
        quadrature: Some(q),
        validity_notes: notes,
    })
}

/// `HP_k(n)` from the reduced-variable formula with `b' = b/a`:
///
/// `-1/(2b^k) + 1/(2(ain+b)^k) + (2π/a)^k ∫ p_k(u) e^{πu(in+2b')} sin(πnu)cot(πu) du`,
///
/// where `p_k` is the polylogarithm closed form. Requires `i·b/a ∉ ℤ`.
pub fn hpk_exponential(params: &HPParams, tol: f64) -> Result<MethodReport> {
    check_tol(tol)?;
    params.check()?;
    let obstruction = params.exp_obstruction();
    if obstruction <= VALIDITY_EPS {
        return Err(Error::Validity(format!(
            "i·b/a is an integer for a = {}, b = {} + {}i",
            params.a, params.b.re, params.b.im
        )));
    }
    let mut notes = Vec::new();
    near_note(&mut notes, "i·b/a", obstruction);

    let reduced = params.b / params.a as f64;
    let poly = pk_closed_form(params.k as usize, reduced)?;
    let prefactor = ComplexScalar::new(2.0 * PI / params.a as f64, 0.0).powi(params.k as i32);
    let freq = (I * params.n as f64 + reduced * 2.0) * PI;
    let q = integrate_kernel(&poly, |u| (freq * u).exp(), params.n, 1, prefactor, tol);
    quad_note(&mut notes, &q);
    Ok(MethodReport {
        value: boundary_terms(params.b, params.term_base(params.n), params.k)
            + prefactor * q.value,
        method: Method::Exp,
        quadrature: Some(q),
        validity_notes: notes,
    })
}

/// `Σ_{j=1..n} 1/(j+b)^k` for `b ∉ ℤ`:
///
/// `-1/(2b^k) + 1/(2(n+b)^k) + (2πi)^k ∫ p_k(u) e^{πiu(n+2b)} sin(πnu)cot(πu) du`,
///
/// with `p_k` the closed form evaluated at `i·b`.
pub fn hpk_real_shift(b: ComplexScalar, k: u32, n: u64, tol: f64) -> Result<MethodReport> {
    check_tol(tol)?;
    check_k(k)?;
    let obstruction = distance_to_integer(b);
    if obstruction <= VALIDITY_EPS {
        return Err(Error::Validity(format!("b = {} + {}i is an integer", b.re, b.im)));
    }
    let mut notes = Vec::new();
    near_note(&mut notes, "b", obstruction);

    let poly = pk_closed_form(k as usize, I * b)?;
    let prefactor = (I * (2.0 * PI)).powi(k as i32);
    let freq = I * PI * (b * 2.0 + n as f64);
    let q = integrate_kernel(&poly, |u| (freq * u).exp(), n, 1, prefactor, tol);
    quad_note(&mut notes, &q);
    Ok(MethodReport {
        value: boundary_terms(b, b + n as f64, k) + prefactor * q.value,
        method: Method::RealShift,
        quadrature: Some(q),
        validity_notes: notes,
    })
}

/// `|cos 2πb - 1|` and `|sin 2πb|`.
fn trig_obstructions(b: ComplexScalar) -> (f64, f64) {
    let arg = b * (2.0 * PI);
    ((arg.cos() - 1.0).norm(), arg.sin().norm())
}

fn check_trig(b: ComplexScalar, needs_sin: bool, notes: &mut Vec<String>) -> Result<ComplexScalar> {
    let (cos_gap, sin_gap) = trig_obstructions(b);
    if cos_gap <= VALIDITY_EPS {
        return Err(Error::Validity(format!("cos 2πb = 1 for b = {} + {}i", b.re, b.im)));
    }
    near_note(notes, "cos 2πb", cos_gap);
    if needs_sin {
        if sin_gap <= VALIDITY_EPS {
            return Err(Error::Validity(format!("sin 2πb = 0 for b = {} + {}i", b.re, b.im)));
        }
        near_note(notes, "sin 2πb", sin_gap);
    }
    Ok((b * (2.0 * PI)).sin())
}

fn sign(m: u32) -> f64 {
    if m.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `Σ_{j=1..n} 1/(j+b)^k` from the cosine generating functions.
///
/// Odd `k`: `-(2π)^k/2·∫ f_k(u)(cos 2π(n+b)u - cos 2πbu)cot πu du`.
/// Even `k = 2m`: prefactor `-(2π)^k/(2 sin 2πb)` and polynomial
/// `(-1)^m(1-u)^{2m-1}/(2m-1)! + g_k(u)`.
pub fn hpk_cosine(b: ComplexScalar, k: u32, n: u64, tol: f64) -> Result<MethodReport> {
    check_tol(tol)?;
    check_k(k)?;
    let mut notes = Vec::new();
    let even = k.is_multiple_of(2);
    let sin2 = check_trig(b, even, &mut notes)?;
    let two_pi_k = (2.0 * PI).powi(k as i32);
    let (poly, prefactor) = if even {
        let m = k / 2;
        let lead = UPolynomial::one_minus_u_pow(k as usize - 1).scale(sign(m).into());
        let g = trig_taylor_coeff(TrigGenerator::CosG, k as usize, b)?;
        (&lead + &g, -ComplexScalar::from(two_pi_k) / (sin2 * 2.0))
    } else {
        let f = trig_taylor_coeff(TrigGenerator::CosF, k as usize, b)?;
        (f, ComplexScalar::from(-two_pi_k / 2.0))
    };
    let freq = (b * 2.0 + n as f64) * PI;
    let q = integrate_kernel(&poly, |u| (freq * u).sin() * -2.0, n, 1, prefactor, tol);
    quad_note(&mut notes, &q);
    Ok(MethodReport {
        value: boundary_terms(b, b + n as f64, k) + prefactor * q.value,
        method: Method::Cos,
        quadrature: Some(q),
        validity_notes: notes,
    })
}

/// `Σ_{j=1..n} 1/(j+b)^k` from the sine generating functions.
///
/// Even `k`: `(2π)^k/2·∫ f_k(u)(sin 2π(n+b)u - sin 2πbu)cot πu du`.
/// Odd `k = 2m+1`: prefactor `(2π)^k/(2 sin 2πb)` and polynomial
/// `(-1)^m(1-u)^{2m}/(2m)! + g_k(u)`.
pub fn hpk_sine(b: ComplexScalar, k: u32, n: u64, tol: f64) -> Result<MethodReport> {
    check_tol(tol)?;
    check_k(k)?;
    let mut notes = Vec::new();
    let odd = k % 2 == 1;
    let sin2 = check_trig(b, odd, &mut notes)?;
    let two_pi_k = (2.0 * PI).powi(k as i32);
    let (poly, prefactor) = if odd {
        let m = k / 2;
        let lead = UPolynomial::one_minus_u_pow(k as usize - 1).scale(sign(m).into());
        let g = trig_taylor_coeff(TrigGenerator::SinG, k as usize, b)?;
        (&lead + &g, ComplexScalar::from(two_pi_k) / (sin2 * 2.0))
    } else {
        let f = trig_taylor_coeff(TrigGenerator::SinF, k as usize, b)?;
        (f, ComplexScalar::from(two_pi_k / 2.0))
    };
    let freq = (b * 2.0 + n as f64) * PI;
    let q = integrate_kernel(&poly, |u| (freq * u).cos() * 2.0, n, 1, prefactor, tol);
    quad_note(&mut notes, &q);
    Ok(MethodReport {
        value: boundary_terms(b, b + n as f64, k) + prefactor * q.value,
        method: Method::Sin,
        quadrature: Some(q),
        validity_notes: notes,
    })
}

/// First `j ≥ 0` (with `j = 0` standing for the `b` boundary term) whose base
/// `a·j + b` vanishes, among `0..=n`.
fn first_singular(a: i64, b: i64, n: u64) -> Option<u64> {
    if b != 0 && (-b) % a == 0 {
        let j = -b / a;
        if j >= 1 && (j as u64) <= n {
            return Some(j as u64);
        }
    }
    None
}

/// `Σ_{j=1..n} 1/(a·j+b)^k` for integers `a ≠ 0`, `b`, with Bernoulli-weighted
/// polynomial `Σ_{j} B_{2j}(2 - 2^{2j})(1-u)^{k-2j} / ((2j)!(k-2j)!)`.
///
/// Even `k` integrates against the sine difference, odd `k` against the cosine
/// difference; the prefactor is `-(-1)^{⌊k/2⌋}(2π)^k/2`.
///
/// Whenever a base `a·j + b` vanishes (`b = 0`, `an + b = 0` or an interior
/// `j`), the matching boundary or sum term is dropped and the identity still
/// holds. The `b = 0` boundary term is not part of the sum, so only vanishing
/// sum terms require `skip_singular`.
pub fn hpk_integer(
    a: i64,
    b: i64,
    k: u32,
    n: u64,
    tol: f64,
    skip_singular: bool,
) -> Result<MethodReport> {
    check_tol(tol)?;
    check_k(k)?;
    if a == 0 {
        return Err(Error::InvalidArgument("a must be nonzero".into()));
    }
    let mut notes = Vec::new();
    if let Some(j) = first_singular(a, b, n) {
        if !skip_singular {
            return Err(Error::Singular { j });
        }
        notes.push("singular terms dropped from both sides".to_string());
    }
    if b == 0 {
        notes.push("b = 0 boundary term dropped".to_string());
    }

    let half = k / 2;
    let table = BernoulliTable::new(2 * half as usize)?;
    let poly = (0..=half as usize).fold(UPolynomial::zero(), |acc, j| {
        let bern = table.to_f64(2 * j).expect("index within table");
        let weight = bern * (2.0 - 4f64.powi(j as i32)) / factorial(2 * j);
        &acc + &UPolynomial::one_minus_u_pow(k as usize - 2 * j).scale(weight.into())
    });
    let prefactor = ComplexScalar::from(-sign(half) * (2.0 * PI).powi(k as i32) / 2.0);
    let last = a * n as i64 + b;
    let freq = PI * (last + b) as f64;
    let even = k.is_multiple_of(2);
    let q = if even {
        integrate_kernel(&poly, |u| ComplexScalar::from(2.0 * (freq * u).cos()), n, a, prefactor, tol)
    } else {
        integrate_kernel(&poly, |u| ComplexScalar::from(-2.0 * (freq * u).sin()), n, a, prefactor, tol)
    };
    quad_note(&mut notes, &q);

    let mut value = prefactor * q.value;
    if b != 0 {
        value -= 0.5 * (b as f64).powi(-(k as i32));
    }
    if last != 0 {
        value += 0.5 * (last as f64).powi(-(k as i32));
    }
    Ok(MethodReport {
        value,
        method: if even { Method::IntegerEven } else { Method::IntegerOdd },
        quadrature: Some(q),
        validity_notes: notes,
    })
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, m| acc * m as f64)
}

/// Residual of the order-one forward difference
///
/// `2π∫(1-u)[cos 2π(an+b)u - cos 2π(a(n-1)+b)u]·cot(πau) du = -1/(an+b) - 1/(a(n-1)+b)`
///
/// with any vanishing denominator dropped from the right-hand side.
pub fn forward_difference_check(a: i64, b: i64, n: u64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if a == 0 || n == 0 {
        return Err(Error::InvalidArgument("need a != 0 and n >= 1".into()));
    }
    // cos A - cos B = -2 sin((A+B)/2) sin((A-B)/2), and (A-B)/2 = πau
    let freq = PI * (a * (2 * n as i64 - 1) + 2 * b) as f64;
    let opts = QuadratureOptions::with_tol(tol / (2.0 * PI)).for_frequency(n.saturating_mul(a.unsigned_abs()));
    let q = integrate_with(
        |u| ComplexScalar::from(-2.0 * (1.0 - u) * (freq * u).sin() * kernel_sin_cot(1, a, u)),
        &opts,
    );
    if !q.converged {
        return Err(Error::InvalidArgument(format!(
            "quadrature did not converge (error estimate {:.3e})",
            q.error_estimate
        )));
    }
    let lhs = 2.0 * PI * q.value.re;
    let rhs: f64 = [a * n as i64 + b, a * (n as i64 - 1) + b]
        .iter()
        .filter(|&&d| d != 0)
        .map(|&d| -1.0 / d as f64)
        .sum();
    Ok((lhs - rhs).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagrangeKind {
    Cos,
    Sin,
}

/// Relative residual of the geometric-progression identity
///
/// `Σ_{j=1..k} cos(2πn(aij+b)/k) = -½cos(2πbn/k) + ½cos(2πn(ai + b/k))
///     + cos(πn(ai + 2b/k))·sin(πain)·cot(πain/k)`
///
/// (and its sine twin), in complex arithmetic. The residual `|LHS - RHS|` is
/// scaled by `1 + max` of the term moduli, since the terms grow like
/// `e^{2π|a|n}`.
pub fn lagrange_identity_check(
    kind: LagrangeKind,
    k: u32,
    n: u64,
    a: i64,
    b: ComplexScalar,
) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let trig = |z: ComplexScalar| match kind {
        LagrangeKind::Cos => z.cos(),
        LagrangeKind::Sin => z.sin(),
    };
    let (kf, nf, af) = (k as f64, n as f64, a as f64);
    let cot_arg = I * (PI * af * nf / kf);
    let cot_sin = cot_arg.sin();
    if cot_sin.norm() < 1e-12 {
        return Err(Error::Validity(format!(
            "cot(πain/k) has a pole for a = {a}, n = {n}, k = {k}"
        )));
    }
    let mut scale: f64 = 0.0;
    let mut lhs = ComplexScalar::new(0.0, 0.0);
    for j in 1..=k {
        let term = trig((I * (af * j as f64) + b) * (2.0 * PI * nf / kf));
        scale = scale.max(term.norm());
        lhs += term;
    }
    let t1 = trig(b * (2.0 * PI * nf / kf)) * -0.5;
    let t2 = trig((I * af + b / kf) * (2.0 * PI * nf)) * 0.5;
    let t3 = trig((I * af + b * 2.0 / kf) * (PI * nf)) * (I * (PI * af * nf)).sin() * cot_arg.cos()
        / cot_sin;
    for t in [t1, t2, t3] {
        scale = scale.max(t.norm());
    }
    Ok((lhs - (t1 + t2 + t3)).norm() / (1.0 + scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use crate::scalar::{hp_direct, integer_sum_direct, shift_sum_direct};

    const TOL: f64 = 1e-10;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    fn direct(a: i64, b: ComplexScalar, k: u32, n: u64) -> ComplexScalar {
        hp_direct(&HPParams::new(a, b, k, n).unwrap(), false).unwrap()
    }

    #[test]
    fn hp1_examples() {
        assert!(hp1_exponential(2, c(0.3, 0.1), 0, TOL).unwrap().value.norm() < 1e-14);
        for (a, b, n) in [(1, c(0.5, 0.0), 10), (3, c(0.2, 0.4), 7), (-2, c(0.3, -0.6), 9)] {
            let got = hp1_exponential(a, b, n, TOL).unwrap();
            let want = direct(a, b, 1, n);
            assert!((got.value - want).norm() < 1e-8, "{a} {b} {n}: {} vs {want}", got.value);
            assert_eq!(got.method, Method::Exp);
            assert!(got.converged());
        }
        // i·b = -1
        assert!(matches!(hp1_exponential(1, c(0.0, 1.0), 5, TOL), Err(Error::Validity(_))));
    }

    #[test]
    fn hpk_exponential_examples() {
        let p = HPParams::new(2, c(0.3, 0.0), 1, 5).unwrap();
        let general = hpk_exponential(&p, TOL).unwrap().value;
        let unreduced = hp1_exponential(2, c(0.3, 0.0), 5, TOL).unwrap().value;
        assert!((general - unreduced).norm() < 1e-9);

        let p = HPParams::new(1, c(0.5, 0.0), 3, 12).unwrap();
        let got = hpk_exponential(&p, TOL).unwrap().value;
        assert!((got - hp_direct(&p, false).unwrap()).norm() < 1e-8);

        let p = HPParams::new(3, c(-1.25, 0.5), 4, 0).unwrap();
        assert!(hpk_exponential(&p, TOL).unwrap().value.norm() < TOL);

        // a = 2, b = 4i: i·b/a = -2
        let p = HPParams::new(2, c(0.0, 4.0), 2, 3).unwrap();
        assert!(matches!(hpk_exponential(&p, TOL), Err(Error::Validity(_))));
    }

    #[test]
    fn near_forbidden_parameters_are_noted() {
        let p = HPParams::new(1, c(0.0, 1.0 + 1e-6), 1, 3).unwrap();
        let r = hpk_exponential(&p, TOL).unwrap();
        assert!(r.validity_notes.iter().any(|s| s.contains("forbidden")));
    }

    #[test]
    fn real_shift_examples() {
        let got = hpk_real_shift(c(0.5, 0.0), 1, 4, TOL).unwrap().value;
        let want = 2.0 / 3.0 + 2.0 / 5.0 + 2.0 / 7.0 + 2.0 / 9.0;
        assert!((got - want).norm() < 1e-9);
        for (b, k, n) in [(c(0.25, 0.0), 2, 20), (c(0.1, 0.2), 4, 10)] {
            let got = hpk_real_shift(b, k, n, TOL).unwrap().value;
            let want = shift_sum_direct(b, k, n, false).unwrap();
            assert!((got - want).norm() < 1e-8);
        }
        assert!(hpk_real_shift(c(3.0, 0.0), 2, 4, TOL).is_err());
    }

    #[test]
    fn trig_examples() {
        let b = c(0.3, 0.0);
        for k in [1, 2] {
            let want = shift_sum_direct(b, k, 8, false).unwrap();
            let got = hpk_cosine(b, k, 8, TOL).unwrap().value;
            assert!((got - want).norm() < 1e-7, "cos k={k}");
        }
        let want = shift_sum_direct(b, 2, 8, false).unwrap();
        assert!((hpk_sine(b, 2, 8, TOL).unwrap().value - want).norm() < 1e-7);
        let b = c(0.4, 0.1);
        let want = shift_sum_direct(b, 3, 5, false).unwrap();
        assert!((hpk_sine(b, 3, 5, TOL).unwrap().value - want).norm() < 1e-7);

        assert!(hpk_cosine(c(0.3, 0.0), 3, 0, TOL).unwrap().value.norm() < TOL);
        assert!(hpk_sine(c(0.3, 0.0), 3, 0, TOL).unwrap().value.norm() < TOL);
    }

    #[test]
    fn trig_validity() {
        assert!(hpk_cosine(c(1.0, 0.0), 1, 4, TOL).is_err());
        // half-integer: odd cosine and even sine are fine, the others divide by sin 2πb
        assert!(hpk_cosine(c(0.5, 0.0), 1, 4, TOL).is_ok());
        assert!(hpk_cosine(c(0.5, 0.0), 2, 4, TOL).is_err());
        assert!(hpk_sine(c(0.5, 0.0), 2, 4, TOL).is_ok());
        assert!(hpk_sine(c(0.5, 0.0), 3, 4, TOL).is_err());
    }

    #[test]
    fn integer_examples() {
        let h10 = 7381.0 / 2520.0;
        let r = hpk_integer(1, 0, 1, 10, TOL, true).unwrap();
        assert!((r.value - h10).norm() < 1e-8);
        assert_eq!(r.method, Method::IntegerOdd);
        let r = hpk_integer(1, 0, 1, 10, TOL, false).unwrap();
        assert!((r.value - h10).norm() < 1e-8);
        assert!(matches!(hpk_integer(1, -3, 1, 10, TOL, false), Err(Error::Singular { j: 3 })));

        let want = integer_sum_direct(2, 1, 2, 6, false).unwrap();
        let r = hpk_integer(2, 1, 2, 6, TOL, false).unwrap();
        assert!((r.value - want).norm() < 1e-8);
        assert_eq!(r.method, Method::IntegerEven);

        let want = integer_sum_direct(1, -2, 1, 5, true).unwrap();
        let r = hpk_integer(1, -2, 1, 5, TOL, true).unwrap();
        assert!((r.value - want).norm() < 1e-7);
        assert!(matches!(hpk_integer(1, -2, 1, 5, TOL, false), Err(Error::Singular { j: 2 })));
    }

    #[test]
    fn forward_difference_examples() {
        assert!(forward_difference_check(2, 1, 3, TOL).unwrap() < 1e-9);
        assert!(forward_difference_check(1, -3, 3, TOL).unwrap() < 1e-9);
        assert!(forward_difference_check(1, 0, 1, TOL).unwrap() < 1e-9);
        assert!(forward_difference_check(0, 1, 3, TOL).is_err());
    }

    #[test]
    fn lagrange_examples() {
        assert!(lagrange_identity_check(LagrangeKind::Cos, 3, 2, 1, c(0.3, 0.0)).unwrap() < 1e-10);
        assert!(lagrange_identity_check(LagrangeKind::Sin, 4, 1, 2, c(0.5, 0.2)).unwrap() < 1e-10);
        assert!(lagrange_identity_check(LagrangeKind::Cos, 1, 1, 1, c(0.0, 0.0)).unwrap() < 1e-12);
        assert!(lagrange_identity_check(LagrangeKind::Cos, 3, 0, 1, c(0.3, 0.0)).is_err());
    }

    #[test]
    fn record_round_trips() {
        let r = hpk_real_shift(c(0.5, 0.0), 1, 4, TOL).unwrap();
        let json = serde_json::to_string(&r.record()).unwrap();
        assert!(json.contains("\"method\":\"real_shift\""));
        let back: ReportRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r.record());
        let d = MethodReport::direct(c(1.0, 2.0)).record();
        let json = serde_json::to_string(&d).unwrap();
        assert!(json.contains("\"quad_error\":null"));
    }

    fn telescoping_gap(values: (ComplexScalar, ComplexScalar), term: ComplexScalar) -> f64 {
        (values.1 - values.0 - term).norm()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn exponential_telescopes(
            a in prop::sample::select(vec![-3i64, -1, 1, 2, 4]),
            re in -2.0f64..2.0,
            im in -1.5f64..1.5,
            k in 1u32..=6,
            n in 1u64..=25,
        ) {
            let b = c(re, im);
            let p = HPParams::new(a, b, k, n).unwrap();
            prop_assume!(p.exp_obstruction() > 1e-3);
            let prev = HPParams::new(a, b, k, n - 1).unwrap();
            let values = (hpk_exponential(&prev, TOL).unwrap().value, hpk_exponential(&p, TOL).unwrap().value);
            let term = p.term_base(n).powi(k as i32).inv();
            prop_assert!(telescoping_gap(values, term) <= 1e-8 * (1.0 + values.1.norm()));
        }

        #[test]
        fn order_one_forms_agree(
            a in prop::sample::select(vec![-2i64, 1, 3]),
            re in -1.0f64..1.0,
            im in -0.9f64..0.9,
            n in 0u64..=30,
        ) {
            let b = c(re, im);
            let p = HPParams::new(a, b, 1, n).unwrap();
            prop_assume!(p.exp_obstruction() > 1e-3);
            let general = hpk_exponential(&p, TOL).unwrap().value;
            let unreduced = hp1_exponential(a, b, n, TOL).unwrap().value;
            prop_assert!((general - unreduced).norm() <= 1e-9 * (1.0 + general.norm()));
        }

        #[test]
        fn shift_methods_telescope_and_agree(
            re in 0.05f64..0.95,
            im in -0.3f64..0.3,
            k in 1u32..=5,
            n in 1u64..=20,
        ) {
            let b = c(re, im);
            // keep away from the half-integer breakdown of the even/odd splits
            prop_assume!((re - 0.5).abs() > 0.02 || im.abs() > 0.02);
            let term = (b + n as f64).powi(k as i32).inv();
            let mut values = Vec::new();
            for eval in [hpk_real_shift, hpk_cosine, hpk_sine] {
                let pair = (eval(b, k, n - 1, TOL).unwrap().value, eval(b, k, n, TOL).unwrap().value);
                prop_assert!(telescoping_gap(pair, term) <= 1e-8 * (1.0 + pair.1.norm()));
                values.push(pair.1);
            }
            let p = HPParams::new(1, I * b, k, n).unwrap();
            values.push(hpk_exponential(&p, TOL).unwrap().value * I.powi(k as i32));
            for x in &values {
                for y in &values {
                    prop_assert!((x - y).norm() <= 2e-7);
                }
            }
        }

        #[test]
        fn integer_fallback_matches_skip_sum(
            a in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
            b in -12i64..=12,
            k in 1u32..=6,
            n in 1u64..=15,
        ) {
            let got = hpk_integer(a, b, k, n, TOL, true).unwrap();
            let want = integer_sum_direct(a, b, k, n, true).unwrap();
            prop_assert!((got.value - want).norm() <= 1e-7 * (1.0 + want.abs()));
        }
    }
}
