//! Adaptive Gauss–Kronrod quadrature for complex integrands and Richardson
//! extrapolation over geometric ladders.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Absolute and relative targets; the looser of the two applies.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self {
            rel,
            abs,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    /// ∫|f|, the round-off scale of the result.
    pub magnitude: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    magnitude: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut fv = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 7];
    let mut resabs = fc.norm() * WGK[7];
    for j in 0..7 {
        let x = h * XGK[j];
        let (f1, f2) = (f(c - x), f(c + x));
        fv[j] = (f1, f2);
        k += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = k * 0.5;
    let mut resasc = (fc - mean).norm() * WGK[7];
    for j in 0..7 {
        resasc += ((fv[j].0 - mean).norm() + (fv[j].1 - mean).norm()) * WGK[j];
    }
    let hl = h.abs();
    let (resabs, resasc) = (resabs * hl, resasc * hl);
    let mut err = ((k - g) * h).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Piece {
        a,
        b,
        value: k * h,
        error: err,
        magnitude: resabs,
    }
}

/// Integrates `f` over [points[0], points[last]] with every interior point
/// used as an initial breakpoint.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, points: &[f64], tol: Tolerance) -> Result<Quadrature> {
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Piece> = Vec::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod(&f, w[0], w[1]));
        }
    }
    loop {
        let (value, error, magnitude) = heap
            .iter()
            .chain(frozen.iter())
            .fold((Complex64::new(0.0, 0.0), 0.0, 0.0), |(v, e, m), p| {
                (v + p.value, e + p.error, m + p.magnitude)
            });
        // accuracy below the round-off level of ∫|f| is not attainable
        let target = tol.abs.max(tol.rel * value.norm()).max(100.0 * f64::EPSILON * magnitude);
        let count = heap.len() + frozen.len();
        if error <= target {
            return Ok(Quadrature {
                value,
                error,
                magnitude,
                intervals: count,
            });
        }
        if count >= tol.max_intervals || heap.is_empty() {
            return Err(Error::NonConvergence {
                what: format!("adaptive quadrature ({count} intervals)"),
                estimate: error,
                tolerance: target,
            });
        }
        // refine the worst pieces in a batch before re-checking
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let Some(p) = heap.pop() else { break };
            let m = 0.5 * (p.a + p.b);
            if m <= p.a || m >= p.b {
                frozen.push(p);
                continue;
            }
            heap.push(kronrod(&f, p.a, m));
            heap.push(kronrod(&f, m, p.b));
        }
    }
}

/// Result of a Richardson extrapolation.
#[derive(Debug, Clone, Copy)]
pub struct Extrapolation {
    pub value: Complex64,
    pub error: f64,
}

/// Extrapolates values sampled at h, h/r, h/r², … to h → 0 assuming an
/// error expansion in integer powers of h.
pub fn richardson(values: &[Complex64], ratio: f64) -> Extrapolation {
    assert!(!values.is_empty());
    let n = values.len();
    let mut prev: Vec<Complex64> = vec![values[0]];
    let mut diag = vec![values[0]];
    for (i, &v) in values.iter().enumerate().skip(1) {
        let mut row = vec![v];
        let mut factor = 1.0;
        for j in 1..=i {
            factor *= ratio;
            let t = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
            row.push(t);
        }
        diag.push(row[i]);
        prev = row;
    }
    let error = if n >= 2 {
        (diag[n - 1] - diag[n - 2]).norm()
    } else {
        f64::INFINITY
    };
    Extrapolation {
        value: diag[n - 1],
        error,
    }
}

/// Evaluates `f` at h₀, h₀/2, …, h₀/2^steps and extrapolates to zero.
pub fn halving_ladder<F>(h0: f64, steps: usize, mut f: F) -> Result<Extrapolation>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut values = Vec::with_capacity(steps + 1);
    let mut h = h0;
    for _ in 0..=steps {
        values.push(f(h)?);
        h *= 0.5;
    }
    Ok(richardson(&values, 2.0))
}

/// Fails with `NonConvergence` unless the extrapolation error estimate is
/// within `tol` relative to the value (or `floor` absolute).
pub fn require_contracted(what: &str, e: &Extrapolation, tol: f64, floor: f64) -> Result<Complex64> {
    let target = (tol * e.value.norm()).max(floor);
    if e.error <= target {
        Ok(e.value)
    } else {
        Err(Error::NonConvergence {
            what: what.to_string(),
            estimate: e.error,
            tolerance: target,
        })
    }
}

/// Breakpoints on [0, u_max]: geometric from `width` (×4) up to `knee`,
/// then uniform chunks of at most `chunk` up to `u_max`.
pub fn half_line_points(width: f64, knee: f64, chunk: f64, u_max: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut x = width;
    while x < knee.min(u_max) {
        pts.push(x);
        x *= 4.0;
    }
    let start = *pts.last().unwrap_or(&0.0);
    let start = if knee < u_max { knee.max(start) } else { start };
    if start > 0.0 && start < u_max {
        pts.push(start);
    }
    let n = ((u_max - start) / chunk).ceil().max(1.0) as usize;
    for i in 1..=n {
        pts.push(start + (u_max - start) * i as f64 / n as f64);
    }
    pts.dedup();
    pts
}

/// Mirror of [`half_line_points`] onto [−u_max, u_max].
pub fn full_line_points(width: f64, knee: f64, chunk: f64, u_max: f64) -> Vec<f64> {
    let half = half_line_points(width, knee, chunk, u_max);
    let mut pts: Vec<f64> = half.iter().rev().map(|x| -x).collect();
    pts.extend(half.into_iter().skip(1));
    pts
}
