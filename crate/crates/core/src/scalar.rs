//! Exact Bernoulli numbers, Faulhaber power sums and the direct-summation oracle.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::{ComplexScalar, Error, Result, I};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

/// Default upper bound on the Bernoulli index.
pub const BERNOULLI_CAP: usize = 200;

/// Below this modulus a term `a·i·j + b` is treated as zero.
const SINGULAR_EPS: f64 = 1e-12;

/// Bernoulli numbers `B_0..=B_M`, computed exactly.
///
/// Uses the convention `B_1 = -1/2`. Only even indices are consumed by the
/// formulas, so the sign of `B_1` never leaks out.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliTable {
    values: Vec<ExactRational>,
}

impl BernoulliTable {
    pub fn new(max_index: usize) -> Result<Self> {
        Self::with_cap(max_index, BERNOULLI_CAP)
    }

    pub fn with_cap(max_index: usize, cap: usize) -> Result<Self> {
        if max_index > cap {
            return Err(Error::CapExceeded {
                what: "Bernoulli index",
                requested: max_index,
                cap,
            });
        }
        let mut values: Vec<ExactRational> = Vec::with_capacity(max_index + 1);
        values.push(BigRational::one());
        // Pascal row for C(m+1, r), extended one row per step.
        let mut row: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
        for m in 1..=max_index {
            row = next_pascal_row(&row);
            let acc = values
                .iter()
                .zip(row.iter())
                .fold(BigRational::zero(), |acc, (b, c)| {
                    acc + b * BigRational::from_integer(c.clone())
                });
            values.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        Ok(Self { values })
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, index: usize) -> Option<&ExactRational> {
        self.values.get(index)
    }

    pub fn values(&self) -> &[ExactRational] {
        &self.values
    }

    /// `B_index` as a double, converted only at the point of use.
    pub fn to_f64(&self, index: usize) -> Option<f64> {
        self.values.get(index).and_then(|b| b.to_f64())
    }
}

pub fn bernoulli_table(max_index: usize) -> Result<BernoulliTable> {
    BernoulliTable::new(max_index)
}

fn next_pascal_row(row: &[BigInt]) -> Vec<BigInt> {
    let mut next = Vec::with_capacity(row.len() + 1);
    next.push(BigInt::one());
    for w in row.windows(2) {
        next.push(&w[0] + &w[1]);
    }
    next.push(BigInt::one());
    next
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, m| acc * BigInt::from(m))
}

fn ratio(num: BigInt, den: BigInt) -> ExactRational {
    BigRational::new(num, den)
}

/// `Σ_{j=1..n} j^{2i}` from the Bernoulli expansion.
///
/// `i = 0` is rejected: the expansion evaluates to `n + 1/2` there.
pub fn faulhaber_even(i: usize, n: u64) -> Result<ExactRational> {
    if i == 0 {
        return Err(Error::InvalidArgument(
            "faulhaber_even requires i >= 1".into(),
        ));
    }
    let table = BernoulliTable::new(2 * i)?;
    Ok(faulhaber_sum(&table, 2 * i, i, n))
}

/// `Σ_{j=1..n} j^{2i+1}` from the Bernoulli expansion.
pub fn faulhaber_odd(i: usize, n: u64) -> Result<ExactRational> {
    let table = BernoulliTable::new(2 * i)?;
    Ok(faulhaber_sum(&table, 2 * i + 1, i, n))
}

// n^p/2 + Σ_{j=0..i} p! B_{2j} n^{p+1-2j} / ((2j)! (p+1-2j)!)
fn faulhaber_sum(table: &BernoulliTable, p: usize, i: usize, n: u64) -> ExactRational {
    let n_big = BigInt::from(n);
    let pow = |e: usize| num::pow(n_big.clone(), e);
    let p_fact = factorial(p);
    let mut total = ratio(pow(p), BigInt::from(2));
    for j in 0..=i {
        let coeff = ratio(
            p_fact.clone() * pow(p + 1 - 2 * j),
            factorial(2 * j) * factorial(p + 1 - 2 * j),
        );
        total += coeff * &table.values[2 * j];
    }
    total
}

/// Parameters of `HP_k(n) = Σ_{j=1..n} 1/(a·i·j + b)^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPParams {
    pub a: i64,
    pub b: ComplexScalar,
    pub k: u32,
    pub n: u64,
}

impl HPParams {
    pub fn new(a: i64, b: ComplexScalar, k: u32, n: u64) -> Result<Self> {
        let params = Self { a, b, k, n };
        params.check()?;
        Ok(params)
    }

    pub fn check(&self) -> Result<()> {
        if self.a == 0 {
            return Err(Error::InvalidArgument("a must be nonzero".into()));
        }
        if self.k == 0 || self.k as usize > crate::K_MAX {
            return Err(Error::CapExceeded {
                what: "power k",
                requested: self.k as usize,
                cap: crate::K_MAX,
            });
        }
        if !(self.b.re.is_finite() && self.b.im.is_finite()) {
            return Err(Error::InvalidArgument("b must be finite".into()));
        }
        Ok(())
    }

    /// `a·i·j + b`
    pub fn term_base(&self, j: u64) -> ComplexScalar {
        I * (self.a as f64 * j as f64) + self.b
    }

    /// Distance of `i·b/a` from the nearest integer.
    pub fn exp_obstruction(&self) -> f64 {
        let ratio = I * self.b / self.a as f64;
        distance_to_integer(ratio)
    }

    /// True when `i·b/a ∉ ℤ`, the domain of the exponential formulas.
    pub fn valid_exp(&self) -> bool {
        self.exp_obstruction() > crate::hp::VALIDITY_EPS
    }

    /// `|cos 2πb - 1|` and `|sin 2πb|`, which gate the trigonometric formulas.
    pub fn trig_obstruction(&self) -> (f64, f64) {
        let arg = self.b * (2.0 * std::f64::consts::PI);
        ((arg.cos() - 1.0).norm(), arg.sin().norm())
    }

    pub fn valid_trig(&self) -> bool {
        self.trig_obstruction().0 > crate::hp::VALIDITY_EPS
    }
}

/// Distance of a complex value from the nearest Gaussian-real integer.
pub fn distance_to_integer(z: ComplexScalar) -> f64 {
    ComplexScalar::new(z.re - z.re.round(), z.im).norm()
}

/// The literal sum `Σ_{j=1..n} 1/(a·i·j + b)^k`, term by term.
///
/// With `skip_singular`, terms with `a·i·j + b = 0` are omitted; otherwise they
/// are an error.
pub fn hp_direct(params: &HPParams, skip_singular: bool) -> Result<ComplexScalar> {
    let mut sum = ComplexScalar::new(0.0, 0.0);
    for j in 1..=params.n {
        let base = params.term_base(j);
        if base.norm() < SINGULAR_EPS {
            if skip_singular {
                continue;
            }
            return Err(Error::Singular { j });
        }
        sum += base.powi(-(params.k as i32));
    }
    Ok(sum)
}

/// `Σ_{j=1..n} 1/(j + b)^k`, the sum targeted by the real-shift and
/// trigonometric formulas.
pub fn shift_sum_direct(b: ComplexScalar, k: u32, n: u64, skip_singular: bool) -> Result<ComplexScalar> {
    let mut sum = ComplexScalar::new(0.0, 0.0);
    for j in 1..=n {
        let base = b + j as f64;
        if base.norm() < SINGULAR_EPS {
            if skip_singular {
                continue;
            }
            return Err(Error::Singular { j });
        }
        sum += base.powi(-(k as i32));
    }
    Ok(sum)
}

/// `Σ_{j=1..n} 1/(a·j + b)^k` for integers `a`, `b`.
pub fn integer_sum_direct(a: i64, b: i64, k: u32, n: u64, skip_singular: bool) -> Result<f64> {
    let mut sum = 0.0;
    for j in 1..=n {
        let base = a * j as i64 + b;
        if base == 0 {
            if skip_singular {
                continue;
            }
            return Err(Error::Singular { j });
        }
        sum += (base as f64).powi(-(k as i32));
    }
    Ok(sum)
}
