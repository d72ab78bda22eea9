//! Acceptance gate. Each criterion prints one PASS/FAIL line; the process
//! fails if any criterion does. Reference values come from the oracles below,
//! not from the library.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use harmonic_progression::hp::{
    forward_difference_check, hpk_cosine, hpk_exponential, hpk_integer, hpk_real_shift, hpk_sine,
    lagrange_identity_check, LagrangeKind, MethodReport,
};
use harmonic_progression::quadrature::{integrate, integrate_with, kernel_sin_cot, QuadratureOptions};
use harmonic_progression::rational::{sum_reciprocal_poly, Polynomial};
use harmonic_progression::scalar::{bernoulli_table, faulhaber_even, faulhaber_odd, HPParams};
use harmonic_progression::series::{
    pk_closed_form, pk_from_generating, pk_from_recurrence, qk_from_recurrence, trig_taylor_coeff,
    TrigGenerator,
};
use harmonic_progression::ComplexScalar;
use num::{BigInt, BigRational, One, Zero};

const TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

/// Worst value seen plus the first few failure descriptions.
struct Tally {
    worst: f64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            worst: 0.0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, value: f64, what: impl FnOnce() -> String) {
        if value.is_finite() {
            self.worst = self.worst.max(value);
        }
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.check(false, f64::NAN, || what);
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

// ---------------------------------------------------------------- oracles

/// Σ_{j=1..n} 1/(a·i·j + b)^k term by term.
fn oracle_hp(a: i64, b: ComplexScalar, k: u32, n: u64) -> ComplexScalar {
    (1..=n)
        .map(|j| (c(0.0, (a as f64) * j as f64) + b).powi(k as i32).inv())
        .sum()
}

/// Σ_{j=1..n} 1/(j + b)^k.
fn oracle_shift(b: ComplexScalar, k: u32, n: u64) -> ComplexScalar {
    (1..=n).map(|j| (b + j as f64).powi(k as i32).inv()).sum()
}

/// Σ 1/(a·j + b)^k over j = 1..n with vanishing bases left out.
fn oracle_integer_skip(a: i64, b: i64, k: u32, n: u64) -> f64 {
    (1..=n as i64)
        .map(|j| a * j + b)
        .filter(|&d| d != 0)
        .map(|d| (d as f64).powi(-(k as i32)))
        .sum()
}

fn rel(value: ComplexScalar, reference: ComplexScalar) -> f64 {
    (value - reference).norm() / (1.0 + reference.norm())
}

fn converged_value(r: harmonic_progression::Result<MethodReport>) -> Result<ComplexScalar, String> {
    match r {
        Ok(r) if r.converged() => Ok(r.value),
        Ok(_) => Err("quadrature did not converge".into()),
        Err(e) => Err(e.to_string()),
    }
}

// -------------------------------------------------------------- criteria

fn exponential_grid() -> Tally {
    let mut t = Tally::new();
    for a in [1, 2, 3] {
        for b in [c(0.5, 0.0), c(0.3, 0.7), c(-1.25, 0.5), c(2.0, 0.1)] {
            for k in 1..=5 {
                for n in [0, 1, 2, 5, 20] {
                    let case = format!("a={a} b={b} k={k} n={n}");
                    let value = HPParams::new(a, b, k, n)
                        .map_err(|e| e.to_string())
                        .and_then(|p| converged_value(hpk_exponential(&p, TOL)));
                    match value {
                        Ok(v) => {
                            let r = rel(v, oracle_hp(a, b, k, n));
                            t.check(r <= 1e-8, r, || format!("{case}: {r:.3e}"));
                        }
                        Err(e) => t.fail(format!("{case}: {e}")),
                    }
                }
            }
        }
    }
    t
}

fn shift_formulas() -> Tally {
    type Eval = fn(ComplexScalar, u32, u64, f64) -> harmonic_progression::Result<MethodReport>;
    let methods: [(&str, Eval); 3] = [("real_shift", hpk_real_shift), ("cos", hpk_cosine), ("sin", hpk_sine)];
    let mut t = Tally::new();
    for b in [c(0.3, 0.0), c(0.7, 0.0), c(1.0 / 3.0, 0.0), c(0.3, 0.2)] {
        for k in 1..=5 {
            for n in 0..=20 {
                let reference = oracle_shift(b, k, n);
                let mut values = Vec::new();
                for (name, eval) in methods {
                    match converged_value(eval(b, k, n, TOL)) {
                        Ok(v) => {
                            let r = rel(v, reference);
                            t.check(r <= 1e-7, r, || format!("{name} b={b} k={k} n={n}: {r:.3e}"));
                            values.push(v);
                        }
                        Err(e) => t.fail(format!("{name} b={b} k={k} n={n}: {e}")),
                    }
                }
                // the same sum through the exponential formula: a = 1, b -> i·b
                let exp = HPParams::new(1, c(0.0, 1.0) * b, k, n)
                    .map_err(|e| e.to_string())
                    .and_then(|p| converged_value(hpk_exponential(&p, TOL)));
                match exp {
                    Ok(v) => values.push(v * c(0.0, 1.0).powi(k as i32)),
                    Err(e) => t.fail(format!("exp b={b} k={k} n={n}: {e}")),
                }
                for (i, x) in values.iter().enumerate() {
                    for y in &values[i + 1..] {
                        let d = (x - y).norm();
                        t.check(d <= 2e-7, 0.0, || format!("pairwise b={b} k={k} n={n}: {d:.3e}"));
                    }
                }
            }
        }
    }
    t
}

fn pk_routes() -> Tally {
    let mut t = Tally::new();
    let bs = [c(0.3, 0.0), c(0.5, 0.25), c(0.2, -0.4), c(-0.7, 0.15), c(0.05, 0.6)];
    for b in bs {
        for k in 1..=8 {
            let routes = (pk_from_recurrence(k, b), pk_from_generating(k, b), pk_closed_form(k, b));
            match routes {
                (Ok(r), Ok(g), Ok(cl)) => {
                    let d = r.max_deviation(&g).max(r.max_deviation(&cl)).max(g.max_deviation(&cl));
                    t.check(d <= 1e-10, d, || format!("p_{k} b={b}: {d:.3e}"));
                    if r.is_zero() {
                        t.fail(format!("p_{k} b={b} vanished"));
                    }
                }
                _ => t.fail(format!("p_{k} b={b}: route error")),
            }
        }
        for k in 0..=4 {
            match (qk_from_recurrence(k, b), trig_taylor_coeff(TrigGenerator::CosF, 2 * k + 1, b)) {
                (Ok(q), Ok(f)) => {
                    let d = q.max_deviation(&f);
                    t.check(d <= 1e-10, d, || format!("q_{k} b={b}: {d:.3e}"));
                }
                _ => t.fail(format!("q_{k} b={b}: route error")),
            }
        }
    }
    t
}

/// Σ_{j=1..n} 1/p(j) in naive summation, largest j first.
fn oracle_poly(coeffs: &[f64], n: u64) -> f64 {
    (1..=n)
        .rev()
        .map(|j| {
            let x = j as f64;
            1.0 / coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
        })
        .sum()
}

/// Interval holding Σ_{j≥1} 1/(j²+1): a long direct partial sum plus integral
/// bounds on the tail, ∫_{N+1}^∞ ≤ Σ_{j>N} ≤ ∫_N^∞ of dx/(x²+1).
fn limit_interval() -> (f64, f64) {
    let big_n: u64 = 2_000_000;
    let head = oracle_poly(&[1.0, 0.0, 1.0], big_n);
    let tail_lo = PI / 2.0 - ((big_n + 1) as f64).atan();
    let tail_hi = PI / 2.0 - (big_n as f64).atan();
    // allowance for rounding in the head sum
    let slack = 1e-13;
    (head + tail_lo - slack, head + tail_hi + slack)
}

fn rational_sums() -> Tally {
    let mut t = Tally::new();
    for coeffs in [[1.0, 0.0, 1.0], [2.0, 2.0, 1.0]] {
        for n in [10, 100] {
            let p = Polynomial::from_real(&coeffs).unwrap();
            match sum_reciprocal_poly(&p, n, TOL, false) {
                Ok(s) if s.report.converged() => {
                    let d = (s.report.value - oracle_poly(&coeffs, n)).norm();
                    t.check(d <= 1e-8, d, || format!("{coeffs:?} n={n}: {d:.3e}"));
                }
                Ok(_) => t.fail(format!("{coeffs:?} n={n}: no convergence")),
                Err(e) => t.fail(format!("{coeffs:?} n={n}: {e}")),
            }
        }
    }

    let (lo, hi) = limit_interval();
    let closed = (PI / PI.tanh() - 1.0) / 2.0;
    t.check(lo <= closed && closed <= hi, 0.0, || {
        format!("(π coth π - 1)/2 = {closed} outside [{lo}, {hi}]")
    });
    let p = Polynomial::from_real(&[1.0, 0.0, 1.0]).unwrap();
    match sum_reciprocal_poly(&p, 2000, TOL, false) {
        Ok(s) if s.report.converged() => {
            let v = s.report.value.re;
            let d = (v - lo).abs().max((v - hi).abs());
            t.check(d <= 5e-4, d, || format!("n=2000 partial sum {v} is {d:.3e} from the limit"));
            let direct = oracle_poly(&[1.0, 0.0, 1.0], 2000);
            let e = (v - direct).abs();
            t.check(e <= 1e-8, e, || format!("n=2000 vs direct: {e:.3e}"));
        }
        Ok(_) => t.fail("n=2000: no convergence".into()),
        Err(e) => t.fail(format!("n=2000: {e}")),
    }
    t
}

fn integer_fallback() -> Tally {
    let mut t = Tally::new();
    for n in 1..=50u64 {
        let h: f64 = (1..=n).rev().map(|j| 1.0 / j as f64).sum();
        match converged_value(hpk_integer(1, 0, 1, n, TOL, true)) {
            Ok(v) => {
                let r = rel(v, c(h, 0.0));
                t.check(r <= 1e-8, r, || format!("H_{n}: {r:.3e}"));
            }
            Err(e) => t.fail(format!("H_{n}: {e}")),
        }
    }
    let singular: [(i64, i64, u32, u64); 10] = [
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
    for (a, b, k, n) in singular {
        match converged_value(hpk_integer(a, b, k, n, TOL, true)) {
            Ok(v) => {
                let r = rel(v, c(oracle_integer_skip(a, b, k, n), 0.0));
                t.check(r <= 1e-7, r, || format!("a={a} b={b} k={k} n={n}: {r:.3e}"));
            }
            Err(e) => t.fail(format!("a={a} b={b} k={k} n={n}: {e}")),
        }
    }
    // (1, -3, 3) and (2, -6, 3) have a·n + b = 0, where the difference is 1/a.
    for (a, b, n) in [(2, 1, 3), (1, -3, 3), (1, 0, 1), (2, -6, 3), (3, -6, 2), (-2, 5, 4)] {
        match forward_difference_check(a, b, n, TOL) {
            Ok(r) => t.check(r < 1e-9, r, || format!("forward a={a} b={b} n={n}: {r:.3e}")),
            Err(e) => t.fail(format!("forward a={a} b={b} n={n}: {e}")),
        }
    }
    t
}

fn lagrange() -> Tally {
    let mut t = Tally::new();
    for kind in [LagrangeKind::Cos, LagrangeKind::Sin] {
        for k in 1..=6 {
            for n in 1..=4 {
                for a in [1, 2] {
                    for b in [c(0.0, 0.0), c(0.3, 0.0), c(0.5, 0.2)] {
                        match lagrange_identity_check(kind, k, n, a, b) {
                            Ok(r) => t.check(r < 1e-10, r, || format!("{kind:?} k={k} n={n} a={a} b={b}: {r:.3e}")),
                            Err(e) => t.fail(format!("{kind:?} k={k} n={n} a={a} b={b}: {e}")),
                        }
                    }
                }
            }
        }
    }
    t
}

fn quadrature() -> Tally {
    let mut t = Tally::new();
    let mut close = |value: ComplexScalar, exact: ComplexScalar, what: String| {
        let d = (value - exact).norm();
        t.check(d <= 1e-10, d, || format!("{what}: {d:.3e}"));
    };
    for p in 0..=12 {
        let r = integrate(|u| c(u.powi(p), 0.0), TOL);
        close(r.value, c(1.0 / (p + 1) as f64, 0.0), format!("u^{p}"));
    }
    for w in [0.5, 3.0, 17.25, 60.0, 250.5] {
        let r = integrate_with(|u| c(0.0, w * u).exp(), &QuadratureOptions::with_tol(TOL).for_frequency(w as u64));
        let exact = (c(0.0, w).exp() - 1.0) / c(0.0, w);
        close(r.value, exact, format!("exp(i·{w}·u)"));
    }
    for a in 1..=4i64 {
        for n in 0..=10u64 {
            let r = integrate_with(
                |u| c(kernel_sin_cot(n, a, u), 0.0),
                &QuadratureOptions::with_tol(TOL).for_frequency(a as u64 * n),
            );
            // unit intervals of a·u contribute 1 for even n ≥ 2 and 0 otherwise
            let exact = if n >= 2 && n % 2 == 0 { 1.0 } else { 0.0 };
            close(r.value, c(exact, 0.0), format!("sin·cot n={n} a={a}"));
        }
    }

    for a in 1..=4i64 {
        for n in 1..=10u64 {
            for m in 0..=a {
                let u0 = m as f64 / a as f64;
                let limit = if (m as u64 * n).is_multiple_of(2) { n as f64 } else { -(n as f64) };
                let at = kernel_sin_cot(n, a, u0);
                t.check((at - limit).abs() < 1e-12, 0.0, || format!("K({n},{a}) at {m}/{a} = {at}"));
                for delta in [1e-12, 1e-9, 5e-9, 2e-8, 1e-6] {
                    for side in [-1.0, 1.0] {
                        let u = u0 + side * delta;
                        if !(0.0..=1.0).contains(&u) {
                            continue;
                        }
                        let value = kernel_sin_cot(n, a, u);
                        // sin(nt)cot(t) = n(1 - (n²+2)t²/3 + ...)
                        let tt = PI * a as f64 * delta;
                        let bound = n as f64 * (n * n + 2) as f64 * tt * tt + 1e-12 * n as f64;
                        let d = (value - limit).abs();
                        t.check(d <= bound, d, || format!("K({n},{a}) at {m}/{a}{side:+}·{delta:e}: off by {d:.3e}"));
                    }
                }
            }
        }
    }
    t
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn exact_tables() -> Tally {
    let mut t = Tally::new();
    let power_sum = |p: usize, n: u64| -> BigRational { (1..=n as i64).map(|j| big(j).pow(p as i32)).sum() };
    for n in 0..=30u64 {
        for i in 0..=6usize {
            if i >= 1 {
                let ok = faulhaber_even(i, n).as_ref() == Ok(&power_sum(2 * i, n));
                t.check(ok, 0.0, || format!("Σ j^{} to {n}", 2 * i));
            }
            let ok = faulhaber_odd(i, n).as_ref() == Ok(&power_sum(2 * i + 1, n));
            t.check(ok, 0.0, || format!("Σ j^{} to {n}", 2 * i + 1));
        }
    }
    match bernoulli_table(60) {
        Ok(table) => {
            for m in 1..=60usize {
                let s = (0..=m).fold(BigRational::zero(), |acc, j| {
                    acc + BigRational::from_integer(binomial(m + 1, j)) * table.get(j).unwrap().clone()
                });
                t.check(s.is_zero(), 0.0, || format!("recurrence at m = {m}"));
            }
            let b60 = BigRational::new(
                "-1215233140483755572040304994079820246041491".parse().unwrap(),
                BigInt::from(56786730),
            );
            t.check(table.get(60) == Some(&b60), 0.0, || "B_60 value".into());
        }
        Err(e) => t.fail(format!("table: {e}")),
    }
    t
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Tally);
    let criteria: [Criterion; 8] = [
        ("1 exponential formula vs direct sums", exponential_grid),
        ("2 real-shift, cosine and sine formulas", shift_formulas),
        ("3 p_k routes and q_k recurrence", pk_routes),
        ("4 reciprocal-polynomial sums and limit", rational_sums),
        ("5 integer fallback and forward difference", integer_fallback),
        ("6 Lagrange identities", lagrange),
        ("7 quadrature and kernel guard", quadrature),
        ("8 Faulhaber and Bernoulli exactness", exact_tables),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let start = Instant::now();
        let tally = run();
        let status = if tally.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {name:<45} worst={:.3e} ({:.2}s)",
            tally.worst,
            start.elapsed().as_secs_f64()
        );
        for f in tally.failures.iter().take(5) {
            println!("     {f}");
        }
        all &= tally.passed();
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
