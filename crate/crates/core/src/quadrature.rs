//! Adaptive Gauss-Kronrod integration of complex-valued functions on `[0, 1]`.
//!
//! The 7/15-point rule pair only samples interior nodes, so the endpoints,
//! where the `cot` poles of every integrand sit, are never evaluated.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ComplexScalar;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_SUBDIVISIONS: usize = 10_000;

/// Half-width of the window, in `t = πau - mπ`, where the kernel returns its limit.
pub const KERNEL_GUARD: f64 = 1e-8;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: ComplexScalar,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// False when the tolerance was not reached within the subdivision budget;
    /// `value` is then the best available estimate.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Absolute tolerance on the complex modulus of the error.
    pub tol: f64,
    pub max_subdivisions: usize,
    /// Number of equal segments `[0, 1]` is split into before adapting.
    pub initial_segments: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_subdivisions: MAX_SUBDIVISIONS,
            initial_segments: 1,
        }
    }
}

impl QuadratureOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    /// Raises the initial split to `2^⌈log2(frequency + 2)⌉` segments, so an
    /// integrand oscillating about `frequency` times over `[0, 1]` starts with
    /// at most one or two periods per segment.
    pub fn for_frequency(mut self, frequency: u64) -> Self {
        let depth = ((frequency as f64 + 2.0).log2()).ceil() as u32;
        self.initial_segments = self.initial_segments.max(1usize << depth.min(16));
        self
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: ComplexScalar,
    error: f64,
    abs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F>(f: &F, lo: f64, hi: f64) -> Segment
where
    F: Fn(f64) -> ComplexScalar,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    let mut abs = f_center.norm() * WGK[7];
    let mut samples = [(ComplexScalar::new(0.0, 0.0), ComplexScalar::new(0.0, 0.0)); 7];
    for (i, sample) in samples.iter_mut().enumerate() {
        let dx = half * XGK[i];
        let (f1, f2) = (f(center - dx), f(center + dx));
        kronrod += (f1 + f2) * WGK[i];
        abs += (f1.norm() + f2.norm()) * WGK[i];
        if i % 2 == 1 {
            gauss += (f1 + f2) * WG[i / 2];
        }
        *sample = (f1, f2);
    }
    let mean = kronrod * 0.5;
    let mut asc = (f_center - mean).norm() * WGK[7];
    for (i, (f1, f2)) in samples.iter().enumerate() {
        asc += ((f1 - mean).norm() + (f2 - mean).norm()) * WGK[i];
    }
    let (abs, asc) = (abs * half.abs(), asc * half.abs());

    let mut error = ((kronrod - gauss) * half).norm();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * abs;
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    Segment {
        lo,
        hi,
        value: kronrod * half,
        error,
        abs,
    }
}

/// Integrates `f` over `[0, 1]` to absolute tolerance `tol`.
pub fn integrate<F>(f: F, tol: f64) -> QuadratureResult
where
    F: Fn(f64) -> ComplexScalar,
{
    integrate_with(f, &QuadratureOptions::with_tol(tol))
}

/// Globally adaptive bisection: the segment with the largest error estimate
/// is split until the summed estimate drops below the tolerance, or below the
/// roundoff floor `100·ε·∫|f|`.
pub fn integrate_with<F>(f: F, opts: &QuadratureOptions) -> QuadratureResult
where
    F: Fn(f64) -> ComplexScalar,
{
    let segments = opts.initial_segments.max(1);
    let width = 1.0 / segments as f64;
    let mut heap = BinaryHeap::with_capacity(segments + opts.max_subdivisions);
    let mut evaluations = 0;
    for s in 0..segments {
        let lo = s as f64 * width;
        let hi = if s + 1 == segments { 1.0 } else { (s + 1) as f64 * width };
        heap.push(gauss_kronrod(&f, lo, hi));
        evaluations += 15;
    }

    // Running sums drift slightly; they are recomputed before declaring success.
    let mut error: f64 = heap.iter().map(|s| s.error).sum();
    let mut abs: f64 = heap.iter().map(|s| s.abs).sum();
    let mut subdivisions = 0;
    let mut frozen: Vec<Segment> = Vec::new();
    loop {
        if error <= opts.tol.max(100.0 * f64::EPSILON * abs) {
            let all = heap.iter().chain(frozen.iter());
            let (exact_error, exact_abs) = all.fold((0.0, 0.0), |acc, s| (acc.0 + s.error, acc.1 + s.abs));
            error = exact_error;
            abs = exact_abs;
            if error <= opts.tol.max(100.0 * f64::EPSILON * abs) {
                return finish(heap, frozen, evaluations, true);
            }
        }
        if subdivisions >= opts.max_subdivisions {
            return finish(heap, frozen, evaluations, false);
        }
        let Some(worst) = heap.pop() else {
            return finish(heap, frozen, evaluations, false);
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) || worst.hi - worst.lo < 1e-15 {
            frozen.push(worst);
            continue;
        }
        let left = gauss_kronrod(&f, worst.lo, mid);
        let right = gauss_kronrod(&f, mid, worst.hi);
        error += left.error + right.error - worst.error;
        abs += left.abs + right.abs - worst.abs;
        heap.push(left);
        heap.push(right);
        evaluations += 30;
        subdivisions += 1;
    }
}

fn finish(
    heap: BinaryHeap<Segment>,
    frozen: Vec<Segment>,
    evaluations: usize,
    converged: bool,
) -> QuadratureResult {
    let mut all: Vec<Segment> = heap.into_vec();
    all.extend(frozen);
    // left to right, so the sum does not depend on heap layout
    all.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    let (value, error_estimate) = all
        .iter()
        .fold((ComplexScalar::new(0.0, 0.0), 0.0), |acc, s| {
            (acc.0 + s.value, acc.1 + s.error)
        });
    QuadratureResult {
        value,
        error_estimate,
        evaluations,
        converged,
    }
}

/// `sin(πanu)·cot(πau)`, total on `[0, 1]`.
///
/// Writing `a·u = m + d` with `m` the nearest integer and `t = πd`, the kernel
/// equals `(-1)^{mn}·sin(nt)·cot(t)`, which tends to `n·(-1)^{mn}` as `t → 0`.
/// Inside `|t| < KERNEL_GUARD` the limit is returned.
pub fn kernel_sin_cot(n: u64, a: i64, u: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let scaled = a.unsigned_abs() as f64 * u;
    let m = scaled.round();
    let t = PI * (scaled - m);
    let odd = (m as i64).rem_euclid(2) == 1 && n % 2 == 1;
    let sign = if odd { -1.0 } else { 1.0 };
    if t.abs() < KERNEL_GUARD {
        return sign * n as f64;
    }
    sign * (n as f64 * t).sin() * t.cos() / t.sin()
}
