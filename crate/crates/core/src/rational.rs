//! `Σ_{j=1..n} 1/p(j)` for a polynomial `p` with simple roots.
//!
//! `1/p(x) = Σ_m c_m/(x - r_m)` with `c_m = 1/p'(r_m)`, and each term is an
//! order-one progression: `c/(j - r) = c·i/(i·j + b)` with `b = -i·r`.

use serde::{Deserialize, Serialize};

use crate::hp::{hpk_exponential, hpk_integer, Method, MethodReport, VALIDITY_EPS};
use crate::quadrature::QuadratureResult;
use crate::scalar::{distance_to_integer, HPParams};
use crate::{ComplexScalar, Error, Result, I};

pub const MAX_DEGREE: usize = 16;
pub const ROOT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 500;

/// Roots closer than this (relative) are reported as repeated.
pub const REPEATED_ROOT_GAP: f64 = 1e-6;

/// Polynomial with complex coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<ComplexScalar>,
}

impl Polynomial {
    /// Trailing zeros are dropped; the result must have degree ≥ 1.
    pub fn new(mut coeffs: Vec<ComplexScalar>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::InvalidArgument(
                "polynomial must have degree >= 1".into(),
            ));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidArgument("coefficients must be finite".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| ComplexScalar::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[ComplexScalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> ComplexScalar {
        self.coeffs[self.degree()]
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, x: ComplexScalar) -> ComplexScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(ComplexScalar::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Vec<ComplexScalar> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as f64)
            .collect()
    }

    pub fn eval_derivative(&self, x: ComplexScalar) -> ComplexScalar {
        self.derivative()
            .iter()
            .rev()
            .fold(ComplexScalar::new(0.0, 0.0), |acc, &c| acc * x + c)
    }
}

/// Term `weight/(x - root)` of a partial-fraction decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialFractionTerm {
    pub weight: ComplexScalar,
    pub root: ComplexScalar,
}

impl PartialFractionTerm {
    /// `b` of the equivalent progression `weight·i/(i·j + b)`.
    pub fn hp_shift(&self) -> ComplexScalar {
        -I * self.root
    }

    pub fn eval(&self, x: ComplexScalar) -> ComplexScalar {
        self.weight / (x - self.root)
    }
}

/// All roots by Weierstrass (Durand-Kerner) simultaneous iteration, started
/// from a perturbed circle enclosing the roots.
pub fn find_roots(p: &Polynomial, tol: f64) -> Result<Vec<ComplexScalar>> {
    let degree = p.degree();
    if degree > MAX_DEGREE {
        return Err(Error::CapExceeded {
            what: "polynomial degree",
            requested: degree,
            cap: MAX_DEGREE,
        });
    }
    let lead = p.leading();
    let monic: Vec<ComplexScalar> = p.coeffs().iter().map(|&c| c / lead).collect();
    if degree == 1 {
        return Ok(vec![-monic[0]]);
    }
    let eval = |x: ComplexScalar| {
        monic
            .iter()
            .rev()
            .fold(ComplexScalar::new(0.0, 0.0), |acc, &c| acc * x + c)
    };

    // Fujiwara bound on the root moduli
    let radius = (1..=degree)
        .map(|i| monic[degree - i].norm().powf(1.0 / i as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
        * 2.0;
    let mut roots: Vec<ComplexScalar> = (0..degree)
        .map(|i| {
            let angle = 2.0 * std::f64::consts::PI * i as f64 / degree as f64 + 0.4;
            ComplexScalar::from_polar(radius * (0.9 + 0.02 * i as f64), angle)
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for i in 0..degree {
            let zi = roots[i];
            let denom = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(ComplexScalar::new(1.0, 0.0), |acc, (_, &zj)| acc * (zi - zj));
            if denom.norm() == 0.0 {
                roots[i] += ComplexScalar::new(tol, tol);
                max_step = f64::INFINITY;
                continue;
            }
            let step = eval(zi) / denom;
            roots[i] = zi - step;
            max_step = max_step.max(step.norm() / zi.norm().max(1.0));
        }
        if max_step < tol {
            converged = true;
            break;
        }
    }

    let min_gap = min_pairwise_distance(&roots);
    if let Some((gap, at)) = min_gap {
        // A double root is only resolved to ~sqrt(eps), so the two copies
        // stay about 1e-8 apart even after the steps have converged.
        if gap < REPEATED_ROOT_GAP * at.norm().max(1.0) {
            return Err(Error::RepeatedRoot { re: at.re, im: at.im });
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: MAX_ITERATIONS,
        });
    }
    Ok(roots)
}

pub fn min_pairwise_distance(roots: &[ComplexScalar]) -> Option<(f64, ComplexScalar)> {
    let mut best: Option<(f64, ComplexScalar)> = None;
    for (i, &x) in roots.iter().enumerate() {
        for &y in &roots[i + 1..] {
            let d = (x - y).norm();
            if best.is_none_or(|(g, _)| d < g) {
                best = Some((d, x));
            }
        }
    }
    best
}

/// `c_m = 1/p'(r_m)` for each simple root.
pub fn partial_fractions(p: &Polynomial, roots: &[ComplexScalar]) -> Result<Vec<PartialFractionTerm>> {
    let scale = p.leading().norm();
    roots
        .iter()
        .map(|&r| {
            let d = p.eval_derivative(r);
            if d.norm() < 1e-10 * scale {
                return Err(Error::RepeatedRoot { re: r.re, im: r.im });
            }
            Ok(PartialFractionTerm {
                weight: d.inv(),
                root: r,
            })
        })
        .collect()
}

/// Decomposition together with the summed value.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySum {
    pub terms: Vec<PartialFractionTerm>,
    pub report: MethodReport,
}

/// `Σ_{j=1..n} 1/p(j)`.
///
/// Non-integer roots go through the exponential formula with `a = 1`,
/// `b = -i·r`; integer roots, where that formula is invalid, through the
/// integer fallback. A positive-integer root `r ≤ n` is a singular term and
/// needs `skip_singular`.
pub fn sum_reciprocal_poly(p: &Polynomial, n: u64, tol: f64, skip_singular: bool) -> Result<PolySum> {
    let roots = find_roots(p, ROOT_TOL)?;
    let terms = partial_fractions(p, &roots)?;
    let term_tol = tol / terms.len() as f64;

    let mut value = ComplexScalar::new(0.0, 0.0);
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut converged = true;
    let mut any_exp = false;
    let mut notes = Vec::new();
    for term in &terms {
        let r = term.root;
        let (contribution, report) = if distance_to_integer(r) <= VALIDITY_EPS {
            let m = r.re.round() as i64;
            if m >= 1 && m as u64 <= n && !skip_singular {
                return Err(Error::Singular { j: m as u64 });
            }
            notes.push(format!("integer root {m} routed to the integer fallback"));
            // The b = 0 boundary term is not a singular sum term, so dropping it
            // is always allowed here.
            let scaled_tol = term_tol / term.weight.norm().max(f64::MIN_POSITIVE);
            let report = hpk_integer(1, -m, 1, n, scaled_tol, true)?;
            (term.weight * report.value, report)
        } else {
            any_exp = true;
            let params = HPParams::new(1, term.hp_shift(), 1, n)?;
            let scaled_tol = term_tol / term.weight.norm().max(f64::MIN_POSITIVE);
            let report = hpk_exponential(&params, scaled_tol)?;
            (term.weight * I * report.value, report)
        };
        value += contribution;
        if let Some(q) = report.quadrature {
            error += term.weight.norm() * q.error_estimate;
            evaluations += q.evaluations;
            converged &= q.converged;
        }
        notes.extend(report.validity_notes);
    }
    // A skipped j removes all of 1/p(j), including the other roots' fractions.
    let singular: Vec<u64> = terms
        .iter()
        .filter(|t| distance_to_integer(t.root) <= VALIDITY_EPS)
        .map(|t| t.root.re.round() as i64)
        .filter(|&m| m >= 1 && m as u64 <= n)
        .map(|m| m as u64)
        .collect();
    for &j in &singular {
        let x = ComplexScalar::new(j as f64, 0.0);
        for term in &terms {
            if (term.root - x).norm() > VALIDITY_EPS {
                value -= term.eval(x);
            }
        }
    }
    if p.is_real() && value.im.abs() > 1e-8 {
        notes.push(format!("imaginary residue {:.3e} for a real polynomial", value.im));
    }
    Ok(PolySum {
        terms,
        report: MethodReport {
            value,
            method: if any_exp { Method::Exp } else { Method::IntegerOdd },
            quadrature: Some(QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
                converged,
            }),
            validity_notes: notes,
        },
    })
}
