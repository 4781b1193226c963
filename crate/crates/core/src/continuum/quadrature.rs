//! Adaptive Gauss–Kronrod (7, 15) quadrature.

use crate::error::{Error, Result};

/// Absolute tolerance requested for every integral over a cell.
pub const QUADRATURE_TOLERANCE: f64 = 1e-12;

const MAX_DEPTH: u32 = 48;

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

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, (kronrod - gauss).abs() * h)
}

/// `∫_a^b f` to absolute tolerance `tol`, bisecting where the Gauss and
/// Kronrod estimates disagree.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::Numerical(format!("bad integration range [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let total = b - a;
    let mut stack = vec![(a, b, 0u32)];
    let mut sum = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (value, err) = gk15(&f, lo, hi);
        if !value.is_finite() {
            return Err(Error::Numerical(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        let local = tol * (hi - lo) / total;
        if err <= local.max(f64::EPSILON * value.abs()) {
            sum += value;
        } else if depth >= MAX_DEPTH {
            return Err(Error::Numerical(format!(
                "quadrature did not reach tolerance {tol:e} on [{lo}, {hi}] (error estimate {err:e})"
            )));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(sum)
}

/// Integral over `[a, b]` split at the given interior points first.
pub fn integrate_split(f: impl Fn(f64) -> f64, a: f64, b: f64, splits: &[f64], tol: f64) -> Result<f64> {
    let mut points: Vec<f64> = splits.iter().copied().filter(|&s| s > a && s < b).collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut edges = vec![a];
    edges.extend(points);
    edges.push(b);
    let share = tol / (edges.len() - 1) as f64;
    edges
        .windows(2)
        .map(|w| integrate(&f, w[0], w[1], share))
        .sum()
}
