//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and half-infinite intervals.

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (non-negative half) and weights, 7-point Gauss weights.
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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 2000;
/// Integrand magnitude below which a half-infinite tail is dropped.
pub const TAIL_CUTOFF: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let s = f(center - half * x) + f(center + half * x);
        kronrod += w * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Globally adaptive integration of `f` over `[a, b]`: the interval with the
/// largest error estimate is bisected until the summed estimate is below
/// `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Estimate> {
    let mut parts = vec![(a, b, gk15(&f, a, b))];
    loop {
        let value: f64 = parts.iter().map(|p| p.2.value).sum();
        let error: f64 = parts.iter().map(|p| p.2.error).sum();
        if !value.is_finite() {
            return Err(Error::Numeric("integrand produced a non-finite value".into()));
        }
        if error <= abs_tol {
            return Ok(Estimate { value, error });
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Numeric(format!(
                "quadrature did not converge (error estimate {error:e})"
            )));
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        parts.push((lo, mid, gk15(&f, lo, mid)));
        parts.push((mid, hi, gk15(&f, mid, hi)));
    }
}

/// Smallest power-of-two cutoff `X >= 1` past which `|f|` stays below
/// [`TAIL_CUTOFF`] on a probe grid over `[X, 4X]`.
pub fn tail_cutoff<F: Fn(f64) -> f64>(f: &F) -> Result<f64> {
    let mut x = 1.0;
    while x < 1e8 {
        let quiet = (0..=12).all(|k| f(x * (1.0 + 0.25 * k as f64)).abs() < TAIL_CUTOFF);
        if quiet {
            return Ok(x);
        }
        x *= 2.0;
    }
    Err(Error::Numeric("integrand does not decay on the half line".into()))
}

/// Integral of `f` over `(0, ∞)`, truncated where the integrand drops below
/// [`TAIL_CUTOFF`].
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, abs_tol: f64) -> Result<Estimate> {
    let upper = tail_cutoff(&f)?;
    integrate(f, 0.0, upper, abs_tol)
}
