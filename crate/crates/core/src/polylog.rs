//! Polylogarithm at non-positive integer order.
//!
//! `Li_{-m}(z)` is a rational function of `z`:
//!
//! ```text
//! Li_0(z)  = z / (1 - z)
//! Li_{-m}(z) = z · Σ_{i<m} A(m, i) z^i / (1 - z)^{m+1},   m ≥ 1
//! ```
//!
//! where `A(m, i)` are the Eulerian numbers, i.e. the numerators produced by
//! applying `z·d/dz` to `z/(1 - z)` repeatedly.

use std::sync::OnceLock;

use crate::{ComplexScalar, Error, Result, K_MAX};

/// Arguments closer than this to `z = 1` are rejected.
pub const POLE_EPS: f64 = 1e-9;

/// Largest supported order `m` in `Li_{-m}`.
pub const MAX_ORDER: usize = K_MAX - 1;

/// `Li_{-m}(z)` with its argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegOrderPolylog {
    pub order: usize,
    pub z: ComplexScalar,
}

impl NegOrderPolylog {
    pub fn new(order: usize, z: ComplexScalar) -> Result<Self> {
        check_pole(z)?;
        if order > MAX_ORDER {
            return Err(Error::CapExceeded {
                what: "polylog order",
                requested: order,
                cap: MAX_ORDER,
            });
        }
        Ok(Self { order, z })
    }

    pub fn eval(&self) -> ComplexScalar {
        let one = ComplexScalar::new(1.0, 0.0);
        let z = self.z;
        let numer = &eulerian_table()[self.order];
        let poly = numer
            .iter()
            .rev()
            .fold(ComplexScalar::new(0.0, 0.0), |acc, &c| acc * z + c);
        z * poly / (one - z).powi(self.order as i32 + 1)
    }
}

fn check_pole(z: ComplexScalar) -> Result<()> {
    let distance = (z - 1.0).norm();
    if !(distance > POLE_EPS) {
        return Err(Error::Pole { distance });
    }
    Ok(())
}

/// Numerator coefficients per order; row `m` holds `A(m, 0..m)` (row 0 is `[1]`).
fn eulerian_table() -> &'static [Vec<f64>] {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // A(m, i) = (i + 1)·A(m-1, i) + (m - i)·A(m-1, i-1)
        let mut rows: Vec<Vec<u64>> = vec![vec![1]];
        for m in 1..=MAX_ORDER {
            let prev = &rows[m - 1];
            let at = |i: usize| prev.get(i).copied().unwrap_or(0);
            let row = (0..m)
                .map(|i| {
                    let shifted = if i == 0 { 0 } else { (m - i) as u64 * at(i - 1) };
                    (i as u64 + 1) * at(i) + shifted
                })
                .collect();
            rows.push(row);
        }
        rows.into_iter()
            .map(|r| r.into_iter().map(|c| c as f64).collect())
            .collect()
    })
}

/// `Li_{-m}(z)`.
pub fn polylog_nonpositive(m: usize, z: ComplexScalar) -> Result<ComplexScalar> {
    Ok(NegOrderPolylog::new(m, z)?.eval())
}

/// `c_j = δ_{1j} + Li_{1-j}(w)` for `j = 1..=k`.
pub fn delta_polylog_coeffs(k: usize, w: ComplexScalar) -> Result<Vec<ComplexScalar>> {
    check_pole(w)?;
    if k == 0 || k > K_MAX {
        return Err(Error::CapExceeded {
            what: "coefficient count k",
            requested: k,
            cap: K_MAX,
        });
    }
    (1..=k)
        .map(|j| {
            let delta = if j == 1 { 1.0 } else { 0.0 };
            polylog_nonpositive(j - 1, w).map(|li| li + delta)
        })
        .collect()
}
