//! Verification sweeps: every closed form against direct summation, the
//! three `p_k` routes against each other, and the identity checks.

use serde::{Deserialize, Serialize};

use crate::hp::{
    forward_difference_check, hpk_cosine, hpk_exponential, hpk_integer, hpk_real_shift, hpk_sine,
    lagrange_identity_check, LagrangeKind, MethodReport,
};
use crate::scalar::{hp_direct, integer_sum_direct, shift_sum_direct, HPParams};
use crate::series::{
    pk_closed_form, pk_from_generating, pk_from_recurrence, qk_from_recurrence, trig_taylor_coeff,
    TrigGenerator,
};
use crate::{ComplexScalar, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Oracle,
    Series,
    Lagrange,
    Singular,
    All,
}

/// Worst residual of one formula family over its grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub family: String,
    pub cases: usize,
    pub max_residual: f64,
    pub bound: f64,
    pub passed: bool,
    /// Cases that errored or exceeded the bound, described briefly.
    pub failures: Vec<String>,
}

impl FamilyCheck {
    fn new(family: &str, bound: f64) -> Self {
        Self {
            family: family.to_string(),
            cases: 0,
            max_residual: 0.0,
            bound,
            passed: true,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, case: impl FnOnce() -> String, residual: Result<f64>) {
        self.cases += 1;
        match residual {
            Ok(r) if r <= self.bound => self.max_residual = self.max_residual.max(r),
            Ok(r) => {
                self.max_residual = self.max_residual.max(r);
                self.passed = false;
                self.failures.push(format!("{}: residual {r:.3e}", case()));
            }
            Err(e) => {
                self.passed = false;
                self.failures.push(format!("{}: {e}", case()));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub families: Vec<FamilyCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(|f| f.passed)
    }
}

fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

/// `|value - reference| / (1 + |reference|)`, failing on unconverged quadrature.
pub fn relative_residual(report: &MethodReport, reference: ComplexScalar) -> Result<f64> {
    if !report.converged() {
        return Err(Error::InvalidArgument("quadrature did not converge".into()));
    }
    Ok((report.value - reference).norm() / (1.0 + reference.norm()))
}

pub const EXP_GRID_A: [i64; 3] = [1, 2, 3];
pub const EXP_GRID_N: [u64; 5] = [0, 1, 2, 5, 20];

pub fn exp_grid_b() -> [ComplexScalar; 4] {
    [c(0.5, 0.0), c(0.3, 0.7), c(-1.25, 0.5), c(2.0, 0.1)]
}

pub fn shift_grid_b() -> [ComplexScalar; 4] {
    [c(0.3, 0.0), c(0.7, 0.0), c(1.0 / 3.0, 0.0), c(0.3, 0.2)]
}

pub const SHIFT_GRID_N: [u64; 6] = [0, 1, 2, 5, 10, 20];

pub fn series_grid_b() -> [ComplexScalar; 5] {
    [c(0.3, 0.0), c(0.5, 0.25), c(0.2, -0.4), c(-0.7, 0.15), c(0.05, 0.6)]
}

pub fn oracle_suite(tol: f64) -> SuiteReport {
    let mut exp = FamilyCheck::new("exp vs direct", 1e-8);
    for a in EXP_GRID_A {
        for b in exp_grid_b() {
            for k in 1..=5 {
                for n in EXP_GRID_N {
                    let case = || format!("a={a} b={b} k={k} n={n}");
                    let residual = HPParams::new(a, b, k, n).and_then(|p| {
                        let reference = hp_direct(&p, false)?;
                        relative_residual(&hpk_exponential(&p, tol)?, reference)
                    });
                    exp.record(case, residual);
                }
            }
        }
    }

    type Evaluator = fn(ComplexScalar, u32, u64, f64) -> Result<MethodReport>;
    let evaluators: [(&str, Evaluator); 3] = [
        ("real_shift vs direct", hpk_real_shift),
        ("cos vs direct", hpk_cosine),
        ("sin vs direct", hpk_sine),
    ];
    let mut families: Vec<FamilyCheck> = evaluators
        .iter()
        .map(|(name, _)| FamilyCheck::new(name, 1e-7))
        .collect();
    let mut pairwise = FamilyCheck::new("pairwise exp/real_shift/cos/sin", 2e-7);
    for b in shift_grid_b() {
        for k in 1..=5 {
            for n in SHIFT_GRID_N {
                let reference = shift_sum_direct(b, k, n, false);
                let mut values = Vec::new();
                for ((_, eval), family) in evaluators.iter().zip(families.iter_mut()) {
                    let report = eval(b, k, n, tol);
                    if let Ok(r) = &report {
                        values.push(r.value);
                    }
                    let residual = match (&report, &reference) {
                        (Ok(r), Ok(d)) => relative_residual(r, *d),
                        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                    };
                    family.record(|| format!("b={b} k={k} n={n}"), residual);
                }
                // Σ 1/(j+b)^k = i^k·HP_k(n) with a = 1 and i·b in place of b
                let exp = HPParams::new(1, crate::I * b, k, n)
                    .and_then(|p| hpk_exponential(&p, tol))
                    .map(|r| r.value * crate::I.powi(k as i32));
                if let Ok(v) = exp {
                    values.push(v);
                }
                let spread = values
                    .iter()
                    .flat_map(|x| values.iter().map(move |y| (x - y).norm()))
                    .fold(0.0, f64::max);
                pairwise.record(|| format!("b={b} k={k} n={n}"), Ok(spread));
            }
        }
    }
    let mut all = vec![exp];
    all.extend(families);
    all.push(pairwise);
    SuiteReport {
        suite: Suite::Oracle,
        families: all,
    }
}

pub fn series_suite() -> SuiteReport {
    let mut routes = FamilyCheck::new("p_k recurrence/generating/closed", 1e-10);
    for b in series_grid_b() {
        for k in 1..=8 {
            let residual = (|| {
                let rec = pk_from_recurrence(k, b)?;
                let gen = pk_from_generating(k, b)?;
                let closed = pk_closed_form(k, b)?;
                Ok(rec
                    .max_deviation(&gen)
                    .max(rec.max_deviation(&closed))
                    .max(gen.max_deviation(&closed)))
            })();
            routes.record(|| format!("b={b} k={k}"), residual);
        }
    }
    let mut qk = FamilyCheck::new("q_k recurrence vs cos_f", 1e-10);
    for b in series_grid_b() {
        for k in 0..=4 {
            let residual = (|| {
                let q = qk_from_recurrence(k, b)?;
                let f = trig_taylor_coeff(TrigGenerator::CosF, 2 * k + 1, b)?;
                Ok(q.max_deviation(&f))
            })();
            qk.record(|| format!("b={b} k={k}"), residual);
        }
    }
    SuiteReport {
        suite: Suite::Series,
        families: vec![routes, qk],
    }
}

pub fn lagrange_suite() -> SuiteReport {
    let mut families = Vec::new();
    for (kind, name) in [(LagrangeKind::Cos, "lagrange cos"), (LagrangeKind::Sin, "lagrange sin")] {
        let mut check = FamilyCheck::new(name, 1e-10);
        for k in 1..=6 {
            for n in 1..=4 {
                for a in [1, 2] {
                    for b in [c(0.0, 0.0), c(0.3, 0.0), c(0.5, 0.2)] {
                        check.record(
                            || format!("k={k} n={n} a={a} b={b}"),
                            lagrange_identity_check(kind, k, n, a, b),
                        );
                    }
                }
            }
        }
        families.push(check);
    }
    SuiteReport {
        suite: Suite::Lagrange,
        families,
    }
}

/// Integer configurations `(a, b, k, n)` where some base `a·j + b` vanishes.
pub const SINGULAR_CONFIGS: [(i64, i64, u32, u64); 10] = [
    (1, -2, 1, 5),
    (1, 0, 2, 7),
    (2, -4, 3, 5),
    (3, -3, 2, 4),
    (1, -3, 1, 3),
    (-1, 2, 1, 4),
    (-2, 3, 2, 5),
    (1, -5, 4, 5),
    (3, 0, 3, 3),
    (2, -6, 1, 3),
];

pub fn singular_suite(tol: f64) -> SuiteReport {
    let mut harmonic = FamilyCheck::new("integer fallback b=0 vs H_n", 1e-8);
    for n in 1..=50 {
        let residual = hpk_integer(1, 0, 1, n, tol, true).and_then(|r| {
            let h: f64 = (1..=n).map(|j| 1.0 / j as f64).sum();
            relative_residual(&r, c(h, 0.0))
        });
        harmonic.record(|| format!("n={n}"), residual);
    }
    let mut singular = FamilyCheck::new("skip-singular integer fallback", 1e-7);
    for (a, b, k, n) in SINGULAR_CONFIGS {
        let residual = hpk_integer(a, b, k, n, tol, true).and_then(|r| {
            let d = integer_sum_direct(a, b, k, n, true)?;
            relative_residual(&r, c(d, 0.0))
        });
        singular.record(|| format!("a={a} b={b} k={k} n={n}"), residual);
    }
    let mut forward = FamilyCheck::new("forward difference", 1e-9);
    for (a, b, n) in [(2, 1, 3), (1, -3, 3), (1, 0, 1), (3, -6, 2), (-2, 5, 4), (1, 2, 6)] {
        forward.record(
            || format!("a={a} b={b} n={n}"),
            forward_difference_check(a, b, n, tol),
        );
    }
    SuiteReport {
        suite: Suite::Singular,
        families: vec![harmonic, singular, forward],
    }
}

pub fn run(suite: Suite, tol: f64) -> Vec<SuiteReport> {
    match suite {
        Suite::Oracle => vec![oracle_suite(tol)],
        Suite::Series => vec![series_suite()],
        Suite::Lagrange => vec![lagrange_suite()],
        Suite::Singular => vec![singular_suite(tol)],
        Suite::All => vec![
            oracle_suite(tol),
            series_suite(),
            lagrange_suite(),
            singular_suite(tol),
        ],
    }
}
